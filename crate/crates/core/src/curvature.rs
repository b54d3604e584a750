//! Finite-difference curvature of the assembled metrics.
//!
//! The metrics depend on `(ρ, z)` only, so only those two partials are
//! differenced: a 9-point stencil gives `∂g` and `∂²g` (mixed included),
//! and the Christoffel symbols and their derivatives follow in closed form
//! from those jets. An optional Richardson step combines the jets at `h`
//! and `h/2`.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::metric::{moment_map, tod_metric};
use crate::plf::RodFunction;

/// Ricci tolerance (absolute, coordinate components).
pub const RICCI_TOL: f64 = 1e-5;
/// Tolerance on `|Scal(g_K) - 6k x₁| / max(1, |6k x₁|)`.
pub const SCAL_TOL: f64 = 1e-4;

type M4 = Matrix4<f64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    /// Step; `None` selects [`default_step`].
    pub h: Option<f64>,
    pub richardson: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        FdOptions { h: None, richardson: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub rho: f64,
    pub z: f64,
    pub h: f64,
    pub ricci: M4,
    pub ricci_max_abs: f64,
    pub scal_k_numeric: f64,
    pub scal_k_target: f64,
    /// `|scal_k_numeric - scal_k_target| / max(1, |scal_k_target|)`.
    pub scal_k_residual: f64,
}

/// `h = 10⁻³ (1 + R)`, reduced to `ρ/20` where that would violate `ρ > 10h`.
pub fn default_step(rho: f64, z: f64) -> f64 {
    (1e-3 * (1.0 + rho.hypot(z))).min(rho / 20.0)
}

/// Metric with its first and second `(ρ, z)` partials.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub g: M4,
    pub dg: [M4; 2],
    pub ddg: [[M4; 2]; 2],
}

impl Jet {
    fn combine(fine: &Jet, coarse: &Jet) -> Jet {
        let r = |a: &M4, b: &M4| (a * 4.0 - b) / 3.0;
        Jet {
            g: fine.g,
            dg: [r(&fine.dg[0], &coarse.dg[0]), r(&fine.dg[1], &coarse.dg[1])],
            ddg: [
                [r(&fine.ddg[0][0], &coarse.ddg[0][0]), r(&fine.ddg[0][1], &coarse.ddg[0][1])],
                [r(&fine.ddg[1][0], &coarse.ddg[1][0]), r(&fine.ddg[1][1], &coarse.ddg[1][1])],
            ],
        }
    }
}

/// Central-difference jet of `metric` at `(ρ, z)` with step `h`.
pub fn metric_jet<G>(metric: &G, rho: f64, z: f64, h: f64) -> Result<Jet>
where
    G: Fn(f64, f64) -> Result<M4>,
{
    let mut s = [[M4::zeros(); 3]; 3];
    for (i, row) in s.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let dr = (i as f64 - 1.0) * h;
            let dz = (j as f64 - 1.0) * h;
            *cell = metric(rho + dr, z + dz)?;
        }
    }
    let g = s[1][1];
    let d_rho = (s[2][1] - s[0][1]) / (2.0 * h);
    let d_z = (s[1][2] - s[1][0]) / (2.0 * h);
    let h2 = h * h;
    let dd_rr = (s[2][1] - g * 2.0 + s[0][1]) / h2;
    let dd_zz = (s[1][2] - g * 2.0 + s[1][0]) / h2;
    let dd_rz = (s[2][2] - s[2][0] - s[0][2] + s[0][0]) / (4.0 * h2);
    Ok(Jet { g, dg: [d_rho, d_z], ddg: [[dd_rr, dd_rz], [dd_rz, dd_zz]] })
}

/// Richardson-combined (or plain) jet.
pub fn metric_jet_with<G>(metric: &G, rho: f64, z: f64, h: f64, richardson: bool) -> Result<Jet>
where
    G: Fn(f64, f64) -> Result<M4>,
{
    let coarse = metric_jet(metric, rho, z, h)?;
    if !richardson {
        return Ok(coarse);
    }
    let fine = metric_jet(metric, rho, z, 0.5 * h)?;
    Ok(Jet::combine(&fine, &coarse))
}

/// Ricci tensor (lower indices) and scalar curvature from a jet.
pub fn ricci_from_jet(jet: &Jet, rho: f64, z: f64) -> Result<(M4, f64)> {
    let gi = jet.g.try_inverse().ok_or(Error::SingularMetric { rho, z })?;
    let dgi = [-gi * jet.dg[0] * gi, -gi * jet.dg[1] * gi];

    // ∂_m g_ab, zero unless m ∈ {ρ, z}
    let dg = |m: usize, a: usize, b: usize| if m < 2 { jet.dg[m][(a, b)] } else { 0.0 };
    let ddg = |n: usize, m: usize, a: usize, b: usize| {
        if n < 2 && m < 2 {
            jet.ddg[n][m][(a, b)]
        } else {
            0.0
        }
    };

    // S_lij = ∂_i g_lj + ∂_j g_li - ∂_l g_ij and its derivative along n
    let s = |l: usize, i: usize, j: usize| dg(i, l, j) + dg(j, l, i) - dg(l, i, j);
    let ds = |n: usize, l: usize, i: usize, j: usize| ddg(n, i, l, j) + ddg(n, j, l, i) - ddg(n, l, i, j);

    let mut gamma = [[[0.0; 4]; 4]; 4];
    let mut dgamma = [[[[0.0; 4]; 4]; 4]; 2];
    for k in 0..4 {
        for i in 0..4 {
            for j in i..4 {
                let mut acc = 0.0;
                let mut dacc = [0.0; 2];
                for l in 0..4 {
                    let slij = s(l, i, j);
                    acc += gi[(k, l)] * slij;
                    for n in 0..2 {
                        dacc[n] += dgi[n][(k, l)] * slij + gi[(k, l)] * ds(n, l, i, j);
                    }
                }
                gamma[k][i][j] = 0.5 * acc;
                gamma[k][j][i] = 0.5 * acc;
                for n in 0..2 {
                    dgamma[n][k][i][j] = 0.5 * dacc[n];
                    dgamma[n][k][j][i] = 0.5 * dacc[n];
                }
            }
        }
    }
    let dgam = |n: usize, k: usize, i: usize, j: usize| if n < 2 { dgamma[n][k][i][j] } else { 0.0 };

    let mut ric = M4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let mut r = 0.0;
            for k in 0..4 {
                r += dgam(k, k, i, j) - dgam(j, k, i, k);
                for p in 0..4 {
                    r += gamma[k][k][p] * gamma[p][i][j] - gamma[k][j][p] * gamma[p][i][k];
                }
            }
            ric[(i, j)] = r;
        }
    }
    let scal = (gi.component_mul(&ric)).sum();
    Ok((ric, scal))
}

fn check_step(rho: f64, h: f64) -> Result<()> {
    if !(rho > 0.0) {
        return Err(Error::NonPositiveRho { rho });
    }
    if !(h > 0.0) || rho <= 10.0 * h {
        return Err(Error::StepTooLarge { rho, step: h });
    }
    Ok(())
}

/// Ricci tensor of `g` and scalar curvature of `g_K = x₁² g` at `(ρ, z)`.
pub fn curvature_fd(f: &RodFunction, rho: f64, z: f64, opts: FdOptions) -> Result<CurvatureReport> {
    if !(rho > 0.0) {
        return Err(Error::NonPositiveRho { rho });
    }
    let h = opts.h.unwrap_or_else(|| default_step(rho, z));
    check_step(rho, h)?;

    let g = |r: f64, z: f64| tod_metric(f, r, z).map(|m| m.g);
    let jet = metric_jet_with(&g, rho, z, h, opts.richardson)?;
    let (ricci, _) = ricci_from_jet(&jet, rho, z)?;
    let ricci_max_abs = ricci.iter().fold(0.0_f64, |m, x| m.max(x.abs()));

    let gk = |r: f64, z: f64| -> Result<M4> {
        let x1 = moment_map(f, r, z)?.x1;
        Ok(tod_metric(f, r, z)?.g * (x1 * x1))
    };
    let jet_k = metric_jet_with(&gk, rho, z, h, opts.richardson)?;
    let (_, scal_k_numeric) = ricci_from_jet(&jet_k, rho, z)?;
    let scal_k_target = 6.0 * f.scale() * moment_map(f, rho, z)?.x1;
    let scal_k_residual = (scal_k_numeric - scal_k_target).abs() / scal_k_target.abs().max(1.0);

    Ok(CurvatureReport { rho, z, h, ricci, ricci_max_abs, scal_k_numeric, scal_k_target, scal_k_residual })
}

/// Ricci check with step `h` and Richardson extrapolation on.
pub fn ricci_fd(f: &RodFunction, rho: f64, z: f64, h: f64) -> Result<CurvatureReport> {
    curvature_fd(f, rho, z, FdOptions { h: Some(h), richardson: true })
}

/// Kähler scalar-curvature check; same computation as [`ricci_fd`].
pub fn scal_kahler_fd(f: &RodFunction, rho: f64, z: f64, h: f64) -> Result<CurvatureReport> {
    ricci_fd(f, rho, z, h)
}
