//! The axisymmetric harmonic generating function `U` and its conjugate `H`.
//!
//! `U = A log ρ² + Σ a_i U₀(ρ, z - z_i)` where `U₀ = 2R - 2z asinh(z/ρ)` is the
//! Taub-NUT asymptote. Every derivative is taken in closed form; the inverse
//! hyperbolic sine replaces `log((R-z)/(R+z))`, which loses all its digits
//! when `|z| ≫ ρ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::plf::RodFunction;

/// Additive normalization of the conjugate function `H`.
///
/// `H` is only fixed up to a constant, and the constant shifts the twist `F`
/// by `-2c/k` (a change of the angular coordinate `t ↦ t + c' x₃`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Gauge {
    /// `H = 2Az + Σ a_i H₀(ρ, z - z_i)` with no added constant. Taub-NUT then
    /// has `F = 2n z / R`.
    Natural,
    /// Constant chosen so the rod constant of the leftmost edge vanishes.
    #[default]
    FirstRodZero,
}

/// `U`, its first and second partials, and `H` at one point of the half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSample {
    pub rho: f64,
    pub z: f64,
    pub u: f64,
    pub u_rho: f64,
    pub u_z: f64,
    pub u_rhorho: f64,
    pub u_rhoz: f64,
    pub u_zz: f64,
    pub h: f64,
}

impl PotentialSample {
    /// `U_ρρ + U_ρ/ρ + U_zz`.
    pub fn laplacian(&self) -> f64 {
        self.u_rhorho + self.u_rho / self.rho + self.u_zz
    }

    /// Magnitude against which the Laplacian residual is judged.
    pub fn laplacian_scale(&self) -> f64 {
        self.u_rhorho.abs() + (self.u_rho / self.rho).abs() + self.u_zz.abs()
    }

    /// `H_ρ = -ρ U_z`.
    pub fn h_rho(&self) -> f64 {
        -self.rho * self.u_z
    }

    /// `H_z = ρ U_ρ`.
    pub fn h_z(&self) -> f64 {
        self.rho * self.u_rho
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveRho { rho })
    }
}

/// The Taub-NUT asymptote `U₀` with its conjugate `H₀ = zR + ρ² asinh(z/ρ)`.
pub fn u0_eval(rho: f64, z: f64) -> Result<PotentialSample> {
    check_rho(rho)?;
    Ok(u0_unchecked(rho, z))
}

fn u0_unchecked(rho: f64, z: f64) -> PotentialSample {
    let r = rho.hypot(z);
    let ash = (z / rho).asinh();
    PotentialSample {
        rho,
        z,
        u: 2.0 * r - 2.0 * z * ash,
        u_rho: 2.0 * r / rho,
        u_z: -2.0 * ash,
        // 2/R - 2R/ρ², rewritten without the cancellation
        u_rhorho: -2.0 * z * z / (r * rho * rho),
        u_rhoz: 2.0 * z / (rho * r),
        u_zz: -2.0 / r,
        h: z * r + rho * rho * ash,
    }
}

/// `U` and `H` for a rod function, with `H` in the [`Gauge::FirstRodZero`] gauge.
pub fn potential_eval(f: &RodFunction, rho: f64, z: f64) -> Result<PotentialSample> {
    potential_eval_in(f, rho, z, Gauge::FirstRodZero)
}

pub fn potential_eval_in(f: &RodFunction, rho: f64, z: f64, gauge: Gauge) -> Result<PotentialSample> {
    check_rho(rho)?;
    let a = f.base();
    let mut s = PotentialSample {
        rho,
        z,
        u: a * (rho * rho).ln(),
        u_rho: 2.0 * a / rho,
        u_z: 0.0,
        u_rhorho: -2.0 * a / (rho * rho),
        u_rhoz: 0.0,
        u_zz: 0.0,
        h: 2.0 * a * z + gauge_offset(f, gauge),
    };
    for k in f.kinks() {
        let t = u0_unchecked(rho, z - k.z);
        let w = k.weight;
        s.u += w * t.u;
        s.u_rho += w * t.u_rho;
        s.u_z += w * t.u_z;
        s.u_rhorho += w * t.u_rhorho;
        s.u_rhoz += w * t.u_rhoz;
        s.u_zz += w * t.u_zz;
        s.h += w * t.h;
    }
    Ok(s)
}

/// Continuous extension of the natural-gauge `H` to the axis:
/// `2Az + Σ a_i (z - z_i)|z - z_i|`.
pub fn h_on_axis_natural(f: &RodFunction, z: f64) -> f64 {
    let spread: f64 = f.kinks().iter().map(|k| k.weight * (z - k.z) * (z - k.z).abs()).sum();
    2.0 * f.base() * z + spread
}

/// Constant added to the natural `H` to reach `gauge`.
pub fn gauge_offset(f: &RodFunction, gauge: Gauge) -> f64 {
    match gauge {
        Gauge::Natural => 0.0,
        Gauge::FirstRodZero => {
            // F(0, z) = (2/k)(f²/f' - H) on the leftmost edge, where f' = -1.
            let z = f.kinks()[0].z - 1.0;
            let v = f.value(z);
            -v * v - h_on_axis_natural(f, z)
        }
    }
}

/// `U_zz` continued to the axis away from the kinks.
pub fn u_zz_on_axis(f: &RodFunction, z: f64) -> f64 {
    -2.0 * f.kinks().iter().map(|k| k.weight / (z - k.z).abs()).sum::<f64>()
}

/// Boundary values of the metric functions on `ρ = 0`, between two kinks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AxisLimits {
    /// Segment with nonzero slope: `F`, `V` and `e^{2ν}` all extend.
    Regular { f_twist: f64, v: f64, e2nu: f64 },
    /// Flat segment: `V ~ coefficient / ρ²` and the `t` circle collapses.
    Flat { v_coefficient: f64 },
}

/// Axis values at `z` in the [`Gauge::FirstRodZero`] gauge.
pub fn axis_limits(f: &RodFunction, z: f64) -> Result<AxisLimits> {
    axis_limits_in(f, z, Gauge::FirstRodZero)
}

pub fn axis_limits_in(f: &RodFunction, z: f64, gauge: Gauge) -> Result<AxisLimits> {
    if !z.is_finite() {
        return Err(Error::NonFinite { field: "z" });
    }
    let edge = f.segment_of(z).ok_or(Error::KinkPoint { z })?;
    let k = f.scale();
    let slope = f.slope(edge);
    let fz = f.value(z);
    let uzz = u_zz_on_axis(f, z);
    if slope == 0.0 {
        return Ok(AxisLimits::Flat { v_coefficient: -4.0 / k * fz * fz / uzz });
    }
    let h = h_on_axis_natural(f, z) + gauge_offset(f, gauge);
    let v = -(2.0 * fz + fz * fz / (slope * slope) * uzz) / k;
    Ok(AxisLimits::Regular {
        f_twist: 2.0 / k * (fz * fz / slope - h),
        v,
        e2nu: slope * slope * v,
    })
}

/// `(F, V, e^{2ν})` on the axis; fails on flat segments.
pub fn axis_limits_regular(f: &RodFunction, z: f64) -> Result<(f64, f64, f64)> {
    match axis_limits(f, z)? {
        AxisLimits::Regular { f_twist, v, e2nu } => Ok((f_twist, v, e2nu)),
        AxisLimits::Flat { .. } => Err(Error::ZeroSlopeSegment { z }),
    }
}

/// Closed-form `U_ρρ + U_ρ/ρ + U_zz`.
pub fn laplacian_residual(f: &RodFunction, rho: f64, z: f64) -> Result<f64> {
    Ok(potential_eval(f, rho, z)?.laplacian())
}
