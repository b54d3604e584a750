//! Grid verification of a rod structure.
//!
//! Every identity the construction promises is sampled: harmonicity and
//! the sign conditions of `U`, positivity of `V`, conjugacy of `H`,
//! Ricci-flatness, the Kähler scalar curvature, constancy of `F` and of
//! `μ + F_i x₁` along each edge, ALF decay, and the lattice relations.
//! Failures are report entries, never errors.

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{curvature_fd, FdOptions, RICCI_TOL, SCAL_TOL};
use crate::delzant::{DelzantReport, DELZANT_TOL};
use crate::error::Result;
use crate::metric::{moment_map, tod_metric, tod_metric_in};
use crate::polytope::{polytope_vertices, RodStructure, VERTEX_TOL};
use crate::potential::{potential_eval_in, Gauge};

pub const REPORT_FORMAT: &str = "report-v1";
pub const HARMONIC_TOL: f64 = 1e-12;
pub const CONJUGACY_TOL: f64 = 1e-6;
pub const EDGE_TOL: f64 = 1e-8;
/// Largest allowed ratio of successive asymptotic errors at `R = 10, 100, 1000`.
pub const DECAY_RATIO: f64 = 0.2;
/// Distance from the axis at which edge invariants are sampled.
pub const EDGE_RHO: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridConfig {
    pub n_rho: usize,
    pub n_z: usize,
    /// `ρ` is log-spaced over `[rho_min, rho_max]`.
    pub rho_min: f64,
    pub rho_max: f64,
    /// `z` spans `[z_1 - margin, z_r + margin]`.
    pub z_margin: f64,
    /// Fixed finite-difference step; `None` for the per-point default.
    pub h: Option<f64>,
    pub richardson: bool,
    pub ricci_tol: f64,
    pub scal_tol: f64,
    pub delzant_tol: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n_rho: 9,
            n_z: 9,
            rho_min: 0.1,
            rho_max: 10.0,
            z_margin: 5.0,
            h: None,
            richardson: true,
            ricci_tol: RICCI_TOL,
            scal_tol: SCAL_TOL,
            delzant_tol: DELZANT_TOL,
        }
    }
}

impl GridConfig {
    pub fn points(&self, rod: &RodStructure) -> Vec<(f64, f64)> {
        let z = rod.f.positions();
        let (z0, z1) = (z[0] - self.z_margin, z[z.len() - 1] + self.z_margin);
        let frac = |i: usize, n: usize| if n > 1 { i as f64 / (n - 1) as f64 } else { 0.5 };
        let (l0, l1) = (self.rho_min.ln(), self.rho_max.ln());
        let mut pts = Vec::with_capacity(self.n_rho * self.n_z);
        for i in 0..self.n_rho {
            let rho = (l0 + (l1 - l0) * frac(i, self.n_rho)).exp();
            for j in 0..self.n_z {
                pts.push((rho, z0 + (z1 - z0) * frac(j, self.n_z)));
            }
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub worst_point: Option<[f64; 2]>,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub format: &'static str,
    pub rank: usize,
    pub angles: Vec<f64>,
    pub smooth: bool,
    pub grid: GridConfig,
    pub checks: Vec<CheckResult>,
    pub delzant: DelzantReport,
    pub pass: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Running maximum of a residual with the point where it occurred.
#[derive(Debug, Clone, Copy)]
struct Worst {
    residual: f64,
    point: Option<[f64; 2]>,
}

impl Worst {
    fn new() -> Self {
        Worst { residual: f64::NEG_INFINITY, point: None }
    }

    fn push(&mut self, residual: f64, point: [f64; 2]) {
        // a NaN residual is the worst possible outcome and sticks
        if self.residual.is_nan() {
            return;
        }
        if residual.is_nan() || self.point.is_none() || residual > self.residual {
            self.residual = residual;
            self.point = Some(point);
        }
    }

    /// Passing means `residual <= threshold` (or `< threshold` when `strict`).
    fn finish(self, name: &str, threshold: f64, strict: bool) -> CheckResult {
        let residual = if self.point.is_none() { 0.0 } else { self.residual };
        let pass = if strict { residual < threshold } else { residual <= threshold };
        CheckResult { name: name.into(), worst_point: self.point, residual, threshold, pass, note: None }
    }
}

/// Per-point grid sample.
struct PointSample {
    harmonic: f64,
    neg_u_rho: f64,
    u_zz: f64,
    neg_v: f64,
    conjugacy: f64,
    ricci: f64,
    scal: f64,
}

fn sample_point(rod: &RodStructure, cfg: &GridConfig, rho: f64, z: f64) -> Result<PointSample> {
    let f = &rod.f;
    let s = potential_eval_in(f, rho, z, Gauge::Natural)?;
    let m = tod_metric(f, rho, z)?;

    // conjugacy by central differences of H
    let d = 1e-4 * rho.min(1.0 + rho.hypot(z));
    let h_at = |r: f64, zz: f64| potential_eval_in(f, r, zz, Gauge::Natural).map(|p| p.h);
    let h_rho = (h_at(rho + d, z)? - h_at(rho - d, z)?) / (2.0 * d);
    let h_z = (h_at(rho, z + d)? - h_at(rho, z - d)?) / (2.0 * d);
    let grad = s.h_rho().abs() + s.h_z().abs();
    let conjugacy = ((h_rho - s.h_rho()).abs() + (h_z - s.h_z()).abs()) / grad.max(f64::MIN_POSITIVE);

    let c = curvature_fd(f, rho, z, FdOptions { h: cfg.h, richardson: cfg.richardson })?;
    Ok(PointSample {
        harmonic: s.laplacian().abs() / s.laplacian_scale(),
        neg_u_rho: -s.u_rho,
        u_zz: s.u_zz,
        neg_v: -m.v,
        conjugacy,
        ricci: c.ricci_max_abs,
        scal: c.scal_k_residual,
    })
}

/// `z` samples on each edge with nonzero slope, away from the kinks.
fn edge_samples(rod: &RodStructure) -> Vec<(usize, Vec<f64>)> {
    let z = rod.f.positions();
    let r = rod.rank();
    (0..=r)
        .filter(|&i| !rod.f.is_flat(i))
        .map(|i| {
            let zs: Vec<f64> = (1..=5)
                .map(|k| {
                    let k = k as f64;
                    if i == 0 {
                        z[0] - k
                    } else if i == r {
                        z[r - 1] + k
                    } else {
                        z[i - 1] + (z[i] - z[i - 1]) * k / 6.0
                    }
                })
                .collect();
            (i, zs)
        })
        .collect()
}

/// `F(0, z)` from samples at `ρ` and `2ρ`, `ρ = EDGE_RHO`, removing the `O(ρ²)` term.
fn axis_twist(rod: &RodStructure, z: f64) -> Result<f64> {
    let near = tod_metric_in(&rod.f, EDGE_RHO, z, Gauge::FirstRodZero)?.f_twist;
    let far = tod_metric_in(&rod.f, 2.0 * EDGE_RHO, z, Gauge::FirstRodZero)?.f_twist;
    Ok((4.0 * near - far) / 3.0)
}

fn edge_checks(rod: &RodStructure) -> (CheckResult, CheckResult) {
    let mut twist = Worst::new();
    let mut moment = Worst::new();
    let mut failure = None;
    for (i, zs) in edge_samples(rod) {
        let fi = rod.rod_constants[i].expect("edge has nonzero slope");
        let mut reference = None;
        for z in zs {
            let pt = [EDGE_RHO, z];
            match (axis_twist(rod, z), moment_map(&rod.f, EDGE_RHO, z)) {
                (Ok(ft), Ok(mm)) => {
                    twist.push((ft - fi).abs() / fi.abs().max(1.0), pt);
                    let c = mm.mu + fi * mm.x1;
                    let c0 = *reference.get_or_insert(c);
                    moment.push((c - c0).abs() / c0.abs().max(1.0), pt);
                }
                (Err(e), _) | (_, Err(e)) => {
                    twist.push(f64::NAN, pt);
                    moment.push(f64::NAN, pt);
                    failure.get_or_insert(e.to_string());
                }
            }
        }
    }
    let mut a = twist.finish("edge_twist_constancy", EDGE_TOL, false);
    let mut b = moment.finish("edge_moment_constancy", EDGE_TOL, false);
    a.note = failure.clone();
    b.note = failure;
    (a, b)
}

/// `max(|V - 1|, |e^{2ν} - 1|, |R ∂_R F|)` at radius `r` along angle `theta`.
fn asymptotic_error(rod: &RodStructure, r: f64, theta: f64) -> Result<f64> {
    let at = |r: f64| tod_metric(&rod.f, r * theta.sin(), r * theta.cos());
    let m = at(r)?;
    let d = 1e-3;
    let df = (at(r * (1.0 + d))?.f_twist - at(r * (1.0 - d))?.f_twist) / (2.0 * d);
    Ok((m.v - 1.0).abs().max((m.e2nu - 1.0).abs()).max(df.abs()))
}

fn decay_check(rod: &RodStructure) -> CheckResult {
    let mut worst = Worst::new();
    let mut note = None;
    for theta in [0.5, 1.2, 2.5] {
        let errs: Result<Vec<f64>> = [10.0, 100.0, 1000.0].iter().map(|&r| asymptotic_error(rod, r, theta)).collect();
        match errs {
            Ok(e) => {
                for w in 0..2 {
                    let r = 10f64.powi(w as i32 + 2);
                    worst.push(e[w + 1] / e[w], [r * theta.sin(), r * theta.cos()]);
                }
            }
            Err(e) => {
                worst.push(f64::NAN, [10.0 * theta.sin(), 10.0 * theta.cos()]);
                note.get_or_insert(e.to_string());
            }
        }
    }
    let mut c = worst.finish("alf_decay", DECAY_RATIO, false);
    c.note = note;
    c
}

pub fn verify_suite(rod: &RodStructure, cfg: &GridConfig) -> VerificationReport {
    let points = cfg.points(rod);
    let samples: Vec<Result<PointSample>> =
        points.par_iter().map(|&(rho, z)| sample_point(rod, cfg, rho, z)).collect();

    let names = ["harmonicity", "sign_u_rho", "sign_u_zz", "positive_v", "conjugacy", "ricci", "scal_kahler"];
    let mut worst = [Worst::new(); 7];
    let mut eval = Worst::new();
    let mut eval_note = None;
    for (&(rho, z), s) in points.iter().zip(&samples) {
        let pt = [rho, z];
        match s {
            Ok(s) => {
                eval.push(0.0, pt);
                let vals = [s.harmonic, s.neg_u_rho, s.u_zz, s.neg_v, s.conjugacy, s.ricci, s.scal];
                for (w, v) in worst.iter_mut().zip(vals) {
                    w.push(v, pt);
                }
            }
            Err(e) => {
                eval.push(1.0, pt);
                eval_note.get_or_insert(format!("({rho}, {z}): {e}"));
            }
        }
    }

    let mut checks = Vec::new();
    let mut ev = eval.finish("evaluation", 0.0, false);
    ev.note = eval_note;
    checks.push(ev);
    let thresholds = [(HARMONIC_TOL, false), (0.0, true), (0.0, true), (0.0, true), (CONJUGACY_TOL, false), (cfg.ricci_tol, false), (cfg.scal_tol, false)];
    for ((w, name), (t, strict)) in worst.into_iter().zip(names).zip(thresholds) {
        checks.push(w.finish(name, t, strict));
    }

    let (twist, moment) = edge_checks(rod);
    checks.push(twist);
    checks.push(moment);
    checks.push(decay_check(rod));

    let vertex = match polytope_vertices(&rod.f) {
        Ok(p) => {
            let r = p.vertex_residuals.iter().copied().fold(0.0, f64::max);
            CheckResult { name: "vertex_consistency".into(), worst_point: None, residual: r, threshold: VERTEX_TOL, pass: true, note: None }
        }
        Err(e) => CheckResult {
            name: "vertex_consistency".into(),
            worst_point: None,
            residual: f64::INFINITY,
            threshold: VERTEX_TOL,
            pass: false,
            note: Some(e.to_string()),
        },
    };
    checks.push(vertex);

    let delzant = rod.delzant(cfg.delzant_tol);
    let worst_rel = delzant.vertices.iter().map(|v| v.residual).fold(0.0, f64::max);
    checks.push(CheckResult {
        name: "delzant".into(),
        worst_point: None,
        residual: worst_rel,
        threshold: cfg.delzant_tol,
        pass: delzant.lattice_ok && delzant.convex,
        note: Some(if delzant.smooth { "smooth".into() } else { format!("conical, angles {:?}", rod.angles) }),
    });

    let pass = checks.iter().all(|c| c.pass);
    VerificationReport {
        format: REPORT_FORMAT,
        rank: rod.rank(),
        angles: rod.angles.clone(),
        smooth: delzant.smooth,
        grid: cfg.clone(),
        checks,
        delzant,
        pass,
    }
}
