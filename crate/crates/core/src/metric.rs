//! The Ricci-flat metric in Harmark form and its Kähler companion.
//!
//! In coordinates `(ρ, z, x₃, t)`:
//!
//! ```text
//! g = e^{2ν}(dρ² + dz²) + V ρ² dx₃² + V⁻¹ (dt - F dx₃)²
//! ```
//!
//! with `e^{2ν}`, `V` and `F` rational in the derivatives of `U` and the
//! conjugate `H`. The conformal metric `g_K = x₁² g` is Kähler with scalar
//! curvature `6 k x₁`.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::plf::RodFunction;
use crate::potential::{potential_eval_in, Gauge, PotentialSample};

/// Points with `ρ < NEAR_AXIS · (1 + |z|)` are refused by [`tod_metric`].
pub const NEAR_AXIS: f64 = 1e-8;

/// Coordinate indices.
pub const RHO: usize = 0;
pub const Z: usize = 1;
pub const X3: usize = 2;
pub const T: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSample {
    pub rho: f64,
    pub z: f64,
    pub e2nu: f64,
    pub v: f64,
    /// The twist function `F`.
    pub f_twist: f64,
    pub k: f64,
    pub gauge: Gauge,
    /// Components in the order `(ρ, z, x₃, t)`.
    pub g: Matrix4<f64>,
}

impl MetricSample {
    pub fn det(&self) -> f64 {
        self.g.determinant()
    }
}

/// Moments of `∂_t` and `∂_{x₃}` with respect to the Kähler form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub x1: f64,
    /// Centered so that the edge at infinity spans `μ ∈ (-1, 1)`.
    pub mu: f64,
    /// The centering shift `Σ a_i z_i / A` already included in `mu`.
    pub shift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KahlerSample {
    pub x1: f64,
    pub mu: f64,
    pub g_kahler: Matrix4<f64>,
    /// `6 k x₁`, the scalar curvature `g_K` must have.
    pub scal_target: f64,
}

/// Assemble `g` from the scalars `e^{2ν}`, `V`, `F`.
pub fn assemble(rho: f64, e2nu: f64, v: f64, f_twist: f64) -> Matrix4<f64> {
    let mut g = Matrix4::zeros();
    g[(RHO, RHO)] = e2nu;
    g[(Z, Z)] = e2nu;
    g[(X3, X3)] = v * rho * rho + f_twist * f_twist / v;
    g[(T, T)] = 1.0 / v;
    g[(X3, T)] = -f_twist / v;
    g[(T, X3)] = -f_twist / v;
    g
}

/// Metric scalars from a potential sample, for scale `k`.
pub fn metric_from_potential(s: &PotentialSample, k: f64) -> (f64, f64, f64) {
    let d = s.u_rhoz * s.u_rhoz + s.u_zz * s.u_zz;
    let ur2 = s.u_rho * s.u_rho;
    let v = -(s.rho * s.u_rho + ur2 * s.u_zz / d) / k;
    let e2nu = 0.25 * v * s.rho * s.rho * d;
    let f_twist = -(-s.rho * ur2 * s.u_rhoz / d + s.rho * s.rho * s.u_z + 2.0 * s.h) / k;
    (e2nu, v, f_twist)
}

/// The metric at an interior point, with `F` in the [`Gauge::Natural`] gauge.
pub fn tod_metric(f: &RodFunction, rho: f64, z: f64) -> Result<MetricSample> {
    tod_metric_in(f, rho, z, Gauge::Natural)
}

pub fn tod_metric_in(f: &RodFunction, rho: f64, z: f64, gauge: Gauge) -> Result<MetricSample> {
    let s = potential_eval_in(f, rho, z, gauge)?;
    if rho < NEAR_AXIS * (1.0 + z.abs()) {
        return Err(Error::NearAxis { rho, z });
    }
    let k = f.scale();
    let (e2nu, v, f_twist) = metric_from_potential(&s, k);
    if !(v > 0.0) {
        return Err(Error::NonPositiveV { rho, z, v });
    }
    Ok(MetricSample { rho, z, e2nu, v, f_twist, k, gauge, g: assemble(rho, e2nu, v, f_twist) })
}

/// `x₁ = 2/H_z` and the centered `μ`, using `H` in the [`Gauge::FirstRodZero`] gauge.
pub fn moment_map(f: &RodFunction, rho: f64, z: f64) -> Result<Moments> {
    let s = potential_eval_in(f, rho, z, Gauge::FirstRodZero)?;
    Ok(moments_from_potential(f, &s))
}

pub fn moments_from_potential(f: &RodFunction, s: &PotentialSample) -> Moments {
    let k = f.scale();
    let hz = s.h_z();
    let shift = f.first_moment() / f.base();
    let mu = -2.0 / k * (s.z + (s.rho * s.h_rho() - 2.0 * s.h) / hz) + shift;
    Moments { x1: 2.0 / hz, mu, shift }
}

pub fn kahler_sample(f: &RodFunction, rho: f64, z: f64) -> Result<KahlerSample> {
    let m = tod_metric(f, rho, z)?;
    let mm = moment_map(f, rho, z)?;
    Ok(KahlerSample {
        x1: mm.x1,
        mu: mm.mu,
        g_kahler: m.g * (mm.x1 * mm.x1),
        scal_target: 6.0 * m.k * mm.x1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taub_nut() -> RodFunction {
        RodFunction::new(2.0, &[(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn taub_nut_at_three_four() {
        let m = tod_metric(&taub_nut(), 3.0, 4.0).unwrap();
        assert!((m.v - 1.4).abs() < 1e-13);
        assert!((m.e2nu - 1.4).abs() < 1e-13);
        assert!((m.f_twist - 1.6).abs() < 1e-13);
        assert!((m.g[(T, T)] - 0.714_285_7).abs() < 1e-7);
        assert!((m.g[(X3, X3)] - 14.428_571_4).abs() < 1e-7);
        assert!((m.g[(X3, T)] + 1.142_857_1).abs() < 1e-7);
        assert!((m.det() - m.e2nu * m.e2nu * 9.0).abs() < 1e-12 * m.det());
    }

    #[test]
    fn first_rod_gauge_shifts_twist_only() {
        let f = taub_nut();
        let nat = tod_metric(&f, 3.0, 4.0).unwrap();
        let rod = tod_metric_in(&f, 3.0, 4.0, Gauge::FirstRodZero).unwrap();
        assert_eq!(nat.v, rod.v);
        assert!((rod.f_twist - nat.f_twist - 2.0).abs() < 1e-13);
    }

    #[test]
    fn near_axis_refused() {
        assert!(matches!(tod_metric(&taub_nut(), 1e-9, 4.0), Err(Error::NearAxis { .. })));
        assert!(tod_metric(&taub_nut(), 1e-6, 4.0).is_ok());
    }

    #[test]
    fn moments_taub_nut() {
        let f = taub_nut();
        let m = moment_map(&f, 3.0, 4.0).unwrap();
        assert!((m.x1 - 1.0 / 7.0).abs() < 1e-15);
        let axis = moment_map(&f, 1e-7, -2.0).unwrap();
        assert!((axis.mu + 1.0).abs() < 1e-9);
        let far = moment_map(&f, 1e6, 5.0).unwrap();
        assert!(far.x1 < 1e-6);
    }

    #[test]
    fn kahler_targets() {
        let k = kahler_sample(&taub_nut(), 3.0, 4.0).unwrap();
        assert!((k.scal_target - 24.0 / 7.0).abs() < 1e-13);
        let m = tod_metric(&taub_nut(), 3.0, 4.0).unwrap();
        assert!((k.g_kahler[(RHO, RHO)] - k.x1 * k.x1 * m.e2nu).abs() < 1e-15);
    }
}
