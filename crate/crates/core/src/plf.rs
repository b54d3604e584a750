//! Convex piecewise-linear rod functions.
//!
//! A rod function is `f(z) = A + Σ a_i |z - z_i|` with `A > 0`, strictly
//! increasing kinks `z_i` and positive weights summing to one. Its slopes
//! therefore rise from `-1` on the far left to `+1` on the far right, and
//! it is the single datum from which the potential, the metric and the
//! moment polytope are built.

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance on `Σ a_i = 1` and on slope comparisons.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Slopes with magnitude below this are treated as exactly zero.
pub const FLAT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kink {
    pub z: f64,
    pub weight: f64,
}

/// Value and one-sided slopes of a rod function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RodValue {
    pub value: f64,
    pub left_slope: f64,
    pub right_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RodFunction {
    base: f64,
    kinks: Vec<Kink>,
    #[serde(skip)]
    slopes: Vec<f64>,
}

impl RodFunction {
    /// Builds `A + Σ a_i |z - z_i|` from `(z_i, a_i)` pairs.
    ///
    /// Weights summing to one within [`WEIGHT_TOL`] are renormalized exactly;
    /// anything further off is rejected.
    pub fn new(base: f64, kinks: &[(f64, f64)]) -> Result<Self> {
        if kinks.is_empty() {
            return Err(Error::NoKinks);
        }
        if !base.is_finite() {
            return Err(Error::NonFinite { field: "A" });
        }
        for &(z, a) in kinks {
            if !z.is_finite() {
                return Err(Error::NonFinite { field: "kink position" });
            }
            if !a.is_finite() {
                return Err(Error::NonFinite { field: "kink weight" });
            }
        }
        for (i, w) in kinks.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) {
                return Err(Error::NonIncreasingKinks { index: i + 1, prev: w[0].0, next: w[1].0 });
            }
        }
        for (i, &(_, a)) in kinks.iter().enumerate() {
            if !(a > 0.0) {
                return Err(Error::NonPositiveWeight { index: i, weight: a });
            }
        }
        let sum: f64 = kinks.iter().map(|k| k.1).sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::WeightsNotNormalized { sum });
        }
        if !(base > 0.0) {
            return Err(Error::NonPositiveA { base });
        }
        let kinks: Vec<Kink> = kinks
            .iter()
            .map(|&(z, a)| Kink { z, weight: a / sum })
            .collect();
        let slopes = slopes_from_weights(&kinks);
        Ok(Self { base, kinks, slopes })
    }

    /// Rebuilds a rod function from its `r + 1` slopes, `r` kink positions
    /// and the value at the first kink.
    pub fn from_samples(slopes: &[f64], positions: &[f64], value_at_first_kink: f64) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::NoKinks);
        }
        if slopes.len() != positions.len() + 1 {
            return Err(Error::InconsistentLengths {
                reason: format!("{} slopes for {} kinks (need r+1 slopes)", slopes.len(), positions.len()),
            });
        }
        if slopes.iter().chain(positions).any(|x| !x.is_finite()) || !value_at_first_kink.is_finite() {
            return Err(Error::NonFinite { field: "rod samples" });
        }
        let first = slopes[0];
        let last = slopes[slopes.len() - 1];
        if (first + 1.0).abs() > WEIGHT_TOL || (last - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::SlopeRangeViolation {
                reason: format!("outer slopes are {first} and {last}, expected -1 and 1"),
            });
        }
        if let Some(i) = slopes.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::SlopeRangeViolation {
                reason: format!("slope {} = {} does not exceed slope {} = {}", i + 1, slopes[i + 1], i, slopes[i]),
            });
        }
        let z1 = positions[0];
        let pairs: Vec<(f64, f64)> = positions
            .iter()
            .zip(slopes.windows(2))
            .map(|(&z, w)| (z, 0.5 * (w[1] - w[0])))
            .collect();
        let offset: f64 = pairs.iter().map(|&(z, a)| a * (z1 - z).abs()).sum();
        Self::new(value_at_first_kink - offset, &pairs)
    }

    /// The base constant `A`.
    pub fn base(&self) -> f64 {
        self.base
    }

    /// Global scale `k = 2A`.
    pub fn scale(&self) -> f64 {
        2.0 * self.base
    }

    pub fn kinks(&self) -> &[Kink] {
        &self.kinks
    }

    pub fn positions(&self) -> Vec<f64> {
        self.kinks.iter().map(|k| k.z).collect()
    }

    /// Number of kinks `r`; the rod has `r + 1` edges.
    pub fn rank(&self) -> usize {
        self.kinks.len()
    }

    /// Slopes `f'_0 = -1 < … < f'_r = 1`, one per edge.
    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn slope(&self, edge: usize) -> f64 {
        self.slopes[edge]
    }

    pub fn is_flat(&self, edge: usize) -> bool {
        self.slopes[edge] == 0.0
    }

    /// Index of the flat edge, if there is one (there is at most one).
    pub fn flat_edge(&self) -> Option<usize> {
        self.slopes.iter().position(|&s| s == 0.0)
    }

    /// `f(z_i)` for every kink.
    pub fn kink_values(&self) -> Vec<f64> {
        self.kinks.iter().map(|k| self.value(k.z)).collect()
    }

    /// `Σ a_i z_i`.
    pub fn first_moment(&self) -> f64 {
        self.kinks.iter().map(|k| k.weight * k.z).sum()
    }

    pub fn value(&self, z: f64) -> f64 {
        self.base + self.kinks.iter().map(|k| k.weight * (z - k.z).abs()).sum::<f64>()
    }

    pub fn eval(&self, z: f64) -> RodValue {
        let below = self.kinks.iter().filter(|k| k.z < z).count();
        let upto = self.kinks.iter().filter(|k| k.z <= z).count();
        RodValue {
            value: self.value(z),
            left_slope: self.slopes[below],
            right_slope: self.slopes[upto],
        }
    }

    /// Edge (segment) containing `z`, or `None` when `z` sits on a kink.
    pub fn segment_of(&self, z: f64) -> Option<usize> {
        if self.kinks.iter().any(|k| k.z == z) {
            return None;
        }
        Some(self.kinks.iter().filter(|k| k.z < z).count())
    }

    /// `|a|^-1 f(a z + b)`.
    pub fn rescale(&self, a: f64, b: f64) -> Result<Self> {
        if a == 0.0 {
            return Err(Error::ZeroScale);
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite { field: "rescale parameters" });
        }
        let mut pairs: Vec<(f64, f64)> = self.kinks.iter().map(|k| ((k.z - b) / a, k.weight)).collect();
        if a < 0.0 {
            pairs.reverse();
        }
        Self::new(self.base / a.abs(), &pairs)
    }

    /// Translate so that `Σ a_i z_i = 0`.
    pub fn centered(&self) -> Self {
        let m = self.first_moment();
        let kinks: Vec<Kink> = self.kinks.iter().map(|k| Kink { z: k.z - m, weight: k.weight }).collect();
        Self { base: self.base, kinks, slopes: self.slopes.clone() }
    }

    /// `t f + (1 - t) g`; coincident kinks are merged.
    pub fn barycenter(&self, other: &Self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::ParameterConstraintViolated { reason: format!("barycentric weight {t} not in (0,1)") });
        }
        let mut pairs: Vec<(f64, f64)> = self
            .kinks
            .iter()
            .map(|k| (k.z, t * k.weight))
            .chain(other.kinks.iter().map(|k| (k.z, (1.0 - t) * k.weight)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (z, a) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == z => last.1 += a,
                _ => merged.push((z, a)),
            }
        }
        Self::new(t * self.base + (1.0 - t) * other.base, &merged)
    }
}

fn slopes_from_weights(kinks: &[Kink]) -> Vec<f64> {
    let mut slopes = Vec::with_capacity(kinks.len() + 1);
    slopes.push(-1.0);
    let mut acc = 0.0;
    for (i, k) in kinks.iter().enumerate() {
        acc += k.weight;
        let s = if i + 1 == kinks.len() { 1.0 } else { -1.0 + 2.0 * acc };
        slopes.push(if s.abs() < FLAT_TOL { 0.0 } else { s });
    }
    slopes
}
