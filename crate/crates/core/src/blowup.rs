//! Inserting a new edge at a vertex of the rod.
//!
//! Blowing up vertex `i` (between edges `i-1` and `i`) with angle `α`
//! replaces the kink `z_i` by two kinks joined by a new edge whose weighted
//! normal is the sum of its neighbours'. The new slope is fixed by the first
//! component of that relation and the two new kink values by the second.

use serde::Serialize;

use crate::delzant::{delzant_check, ANGLE_TOL, DELZANT_TOL};
use crate::error::{Error, Result};
use crate::plf::RodFunction;
use crate::polytope::RodStructure;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupRequest {
    pub rod: RodStructure,
    /// Kink index `i ∈ 1..=r`.
    pub vertex_index: usize,
    /// New cone angle over `2π`.
    pub alpha: f64,
}

/// Slope and kink values of the inserted edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InsertedEdge {
    pub slope: f64,
    pub f_minus: f64,
    pub f_plus: f64,
}

fn ordering<T>(reason: String) -> Result<T> {
    Err(Error::OrderingViolation { reason })
}

/// New slope and values, without rebuilding the rod.
pub fn inserted_edge(rod: &RodStructure, i: usize, alpha: f64) -> Result<InsertedEdge> {
    let r = rod.rank();
    if i < 1 || i > r {
        return Err(Error::VertexOutOfRange { index: i, rank: r });
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::NonPositiveAngle { index: i, angle: alpha });
    }
    let (pl, pr) = (rod.f.slope(i - 1), rod.f.slope(i));
    if pl == 0.0 || pr == 0.0 {
        return Err(Error::ZeroFlankingSlope { index: i });
    }
    let (al, ar) = (rod.angles[i - 1], rod.angles[i]);
    let num = al * pl + ar * pr;
    if num.abs() <= 1e-14 * (al * pl).abs().max((ar * pr).abs()) {
        return Err(Error::ZeroNewSlope);
    }
    let fi = rod.f.kink_values()[i - 1];
    let jump = fi * fi * (pr - pl);
    let dm = ar * pr - (alpha - al) * pl;
    let dp = (alpha - ar) * pr - al * pl;
    let fm2 = jump * ar / dm;
    let fp2 = jump * al / dp;
    if !(fm2 > 0.0 && fm2.is_finite()) || !(fp2 > 0.0 && fp2.is_finite()) {
        return ordering(format!("new kink values squared are {fm2} and {fp2}"));
    }
    Ok(InsertedEdge { slope: num / alpha, f_minus: fm2.sqrt(), f_plus: fp2.sqrt() })
}

pub fn blow_up(req: &BlowupRequest) -> Result<RodStructure> {
    let rod = &req.rod;
    let i = req.vertex_index;
    let alpha = req.alpha;
    let edge = inserted_edge(rod, i, alpha)?;
    let (al, ar) = (rod.angles[i - 1], rod.angles[i]);
    if (alpha - (al + ar)).abs() <= 1e-14 * (al + ar) {
        return Ok(rod.clone());
    }

    let old_slopes = rod.f.slopes();
    let old_values = rod.f.kink_values();
    let old_z = rod.f.positions();

    let mut slopes = old_slopes[..i].to_vec();
    slopes.push(edge.slope);
    slopes.extend_from_slice(&old_slopes[i..]);
    let mut values = old_values[..i - 1].to_vec();
    values.push(edge.f_minus);
    values.push(edge.f_plus);
    values.extend_from_slice(&old_values[i..]);
    // original edge each new finite segment came from, if any
    let origin = |seg: usize| -> Option<usize> {
        match seg.cmp(&i) {
            std::cmp::Ordering::Less => Some(seg),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(seg - 1),
        }
    };

    let mut z = vec![old_z[0]];
    for seg in 1..values.len() {
        let s = slopes[seg];
        let dz = if s == 0.0 {
            let o = origin(seg).expect("inserted edge has nonzero slope");
            old_z[o] - old_z[o - 1]
        } else {
            (values[seg] - values[seg - 1]) / s
        };
        if !(dz > 0.0) {
            return ordering(format!(
                "segment {seg} would have length {dz:e} (kink values {} to {} on slope {s})",
                values[seg - 1],
                values[seg]
            ));
        }
        z.push(z[seg - 1] + dz);
    }

    let f = RodFunction::from_samples(&slopes, &z, values[0])?;
    let mut angles = rod.angles[..i].to_vec();
    angles.push(alpha);
    angles.extend_from_slice(&rod.angles[i..]);
    let out = RodStructure::new(f, angles)?;

    // the inserted normal is the sum of its neighbours
    let w = &out.normals;
    let scale = w.iter().map(|v| v[0].hypot(v[1])).fold(0.0, f64::max);
    let residual = (0..2).map(|c| (w[i - 1][c] + w[i + 1][c] - w[i][c]).abs()).fold(0.0, f64::max) / scale;
    if residual > ANGLE_TOL {
        return Err(Error::BlowupRelationFailed { residual });
    }
    if delzant_check(&rod.normals, DELZANT_TOL).lattice_ok {
        let rep = delzant_check(&out.normals, DELZANT_TOL);
        if !rep.lattice_ok {
            let worst = rep.vertices.iter().map(|v| v.residual).fold(0.0, f64::max);
            return Err(Error::BlowupRelationFailed { residual: worst });
        }
    }
    Ok(out)
}
