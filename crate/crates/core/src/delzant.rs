//! Lattice regularity of the edge normals and the cone-angle solvers.
//!
//! At an interior vertex `j` the normals of a smooth rod satisfy
//! `v_{j-1} + ε_j v_{j+1} = ℓ_j v_j` with `ε_j = ±1` and `ℓ_j ∈ ℤ`. When the
//! relation can only be met by rescaling the normals, the rescalings are
//! cone angles.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::plf::RodFunction;
use crate::polytope::edge_normals;

/// Default relative tolerance of the Delzant test.
pub const DELZANT_TOL: f64 = 1e-8;
/// Default search bound on `|ℓ_j|`.
pub const ELL_BOUND: i64 = 64;
/// Residual allowed for a cone-angle solution.
pub const ANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexRelation {
    pub epsilon: i8,
    pub ell: i64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelzantReport {
    /// One entry per interior vertex `j = 1 .. r-1`.
    pub vertices: Vec<VertexRelation>,
    /// Every relation holds within `tol`.
    pub lattice_ok: bool,
    /// Lattice relations hold and all cone angles are `2π`.
    pub smooth: bool,
    /// `det(v_{i-1}, v_i)` has one sign along the boundary.
    pub convex: bool,
    pub determinants: Vec<f64>,
    pub ell_bound: i64,
    pub tol: f64,
}

fn det(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Best `(ε, ℓ)` at every interior vertex, with bound [`ELL_BOUND`].
pub fn delzant_check(normals: &[[f64; 2]], tol: f64) -> DelzantReport {
    delzant_check_bounded(normals, tol, ELL_BOUND)
}

pub fn delzant_check_bounded(normals: &[[f64; 2]], tol: f64, ell_bound: i64) -> DelzantReport {
    let scale = normals.iter().map(|v| v[0].hypot(v[1])).fold(0.0, f64::max);
    let mut vertices = Vec::new();
    for j in 1..normals.len().saturating_sub(1) {
        let (a, b, c) = (normals[j - 1], normals[j], normals[j + 1]);
        let mut best = VertexRelation { epsilon: 1, ell: 0, residual: f64::INFINITY };
        for eps in [1i8, -1] {
            for ell in -ell_bound..=ell_bound {
                let e = eps as f64;
                let l = ell as f64;
                let res = (a[0] + e * c[0] - l * b[0]).abs().max((a[1] + e * c[1] - l * b[1]).abs()) / scale;
                if res < best.residual {
                    best = VertexRelation { epsilon: eps, ell, residual: res };
                }
            }
        }
        vertices.push(best);
    }
    let determinants: Vec<f64> = normals.windows(2).map(|w| det(w[0], w[1])).collect();
    let convex = determinants.iter().all(|&d| d > 0.0) || determinants.iter().all(|&d| d < 0.0);
    let lattice_ok = vertices.iter().all(|v| v.residual <= tol);
    DelzantReport { vertices, lattice_ok, smooth: lattice_ok, convex, determinants, ell_bound, tol }
}

/// Cone angles of a rank-two rod from its Kerr-Taub-bolt parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeAnglesR2 {
    /// `(α₀, α₁, α₂)` with `α₁ = 1`.
    pub angles: [f64; 3],
    /// For `a = 0`: angles rescaled by `1/α₀`, so the bolt carries the cone.
    pub bolt_renormalized: Option<[f64; 3]>,
    /// For `a = 0`: total angle `2π/α₀` around the bolt.
    pub bolt_angle: Option<f64>,
}

pub fn solve_cone_angles_r2(a: f64, b: f64, m: f64, n: f64) -> Result<ConeAnglesR2> {
    let bad = |reason: String| Err(Error::ParameterConstraintViolated { reason });
    if ![a, b, m, n].iter().all(|x| x.is_finite()) {
        return bad("parameters must be finite".into());
    }
    if !(m > 0.0) {
        return bad(format!("m = {m} must be positive"));
    }
    if !(b > 0.0) {
        return bad(format!("b = {b} must be positive"));
    }
    if n.abs() > m {
        return bad(format!("|n| = {} exceeds m = {m}", n.abs()));
    }
    let gap = b * b - (a * a + m * m - n * n);
    if gap.abs() > 1e-9 * (b * b).max(1.0) {
        return bad(format!("b² - (a² + m² - n²) = {gap:e}, expected 0"));
    }
    if n == 0.0 {
        return Ok(ConeAnglesR2 { angles: [1.0; 3], bolt_renormalized: None, bolt_angle: None });
    }
    let bm = (b + m) * (b + m);
    let d = 4.0 * n.abs() * b;
    let a0 = (bm - (a - n) * (a - n)) / d;
    let a2 = (bm - (a + n) * (a + n)) / d;
    let angles = [a0, 1.0, a2];
    let (bolt_renormalized, bolt_angle) = if a == 0.0 {
        (Some([1.0, 1.0 / a0, a2 / a0]), Some(2.0 * std::f64::consts::PI / a0))
    } else {
        (None, None)
    };
    Ok(ConeAnglesR2 { angles, bolt_renormalized, bolt_angle })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AngleSolution {
    /// Positive angles normalized to `α₀ = 1`.
    Angles(Vec<f64>),
    Infeasible { reason: String },
}

/// Positive `α` with `α_{j-1} v_{j-1} + α_{j+1} v_{j+1} = ℓ_j α_j v_j` for
/// the unit-angle normals `v`, up to scale.
pub fn solve_cone_angles_general(f: &RodFunction, ell: &[i64]) -> AngleSolution {
    let r = f.rank();
    let infeasible = |reason: String| AngleSolution::Infeasible { reason };
    if ell.len() + 1 != r {
        return infeasible(format!("need {} values of ell for rank {r}, got {}", r.saturating_sub(1), ell.len()));
    }
    if let Some(l) = ell.iter().find(|l| l.abs() > ELL_BOUND) {
        return infeasible(format!("|ell| = {} exceeds {ELL_BOUND}", l.abs()));
    }
    let v = edge_normals(f, &vec![1.0; r + 1]);
    let n = r + 1;
    if r < 2 {
        return AngleSolution::Angles(vec![1.0; n]);
    }
    let rows = 2 * (r - 1);
    // padded to square so the SVD returns a full right basis
    let dim = rows.max(n);
    let mut m = DMatrix::<f64>::zeros(dim, n);
    for j in 1..r {
        for c in 0..2 {
            let row = 2 * (j - 1) + c;
            m[(row, j - 1)] = v[j - 1][c];
            m[(row, j + 1)] = v[j + 1][c];
            m[(row, j)] = -(ell[j - 1] as f64) * v[j][c];
        }
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.max();
    let null: Vec<DVector<f64>> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= 1e-9 * smax)
        .map(|i| vt.row(i).transpose())
        .collect();
    if null.is_empty() {
        return infeasible("homogeneous system has only the zero solution".into());
    }
    let ones = DVector::from_element(n, 1.0);
    let mut alpha = DVector::zeros(n);
    for b in &null {
        alpha += b * b.dot(&ones);
    }
    if !alpha.iter().all(|&x| x > 0.0) {
        return infeasible("nullspace contains no positive vector".into());
    }
    alpha /= alpha[0];
    let residual = (&m * &alpha).amax() / (m.amax() * alpha.amax());
    if residual > ANGLE_TOL {
        return infeasible(format!("residual {residual:e} above {ANGLE_TOL:e}"));
    }
    AngleSolution::Angles(alpha.iter().copied().collect())
}
