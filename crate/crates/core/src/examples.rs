//! The classical families as rod structures.

use serde::Serialize;

use crate::delzant::solve_cone_angles_r2;
use crate::error::{Error, Result};
use crate::plf::RodFunction;
use crate::polytope::RodStructure;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Example {
    /// `f = 2n + |z|`, `n > 0`.
    TaubNut { n: f64 },
    /// `b² = a² + m² - n²`, `|n| ≤ m`; conical unless `n = 0` or `a = 0, m = 5|n|/4`.
    KerrTaubBolt { a: f64, b: f64, m: f64, n: f64 },
    /// `b = 1`, `a = p`, `m = √(1 - p²)`, `n = 0`, `p ∈ [0, 1)`.
    Kerr { p: f64 },
    Schwarzschild,
    /// `a = 0`, `b = 1`, `m = 5/3`, `n = ±4/3`.
    TaubBolt { positive: bool },
    /// `p ∈ (0, 1)`, `q = 1 - p`, normalized by `f(0) = pq`.
    ChenTeo { p: f64 },
}

/// Catalog entry for listing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExampleInfo {
    pub name: &'static str,
    pub params: &'static str,
    pub description: &'static str,
}

pub const CATALOG: &[ExampleInfo] = &[
    ExampleInfo { name: "taub_nut", params: "n > 0 (default 1)", description: "f = 2n + |z|" },
    ExampleInfo {
        name: "kerr_taub_bolt",
        params: "a, b > 0, m > 0, n with b^2 = a^2 + m^2 - n^2, |n| <= m",
        description: "f = m + n + (b-a)/(2b)|z+b| + (b+a)/(2b)|z-b|; cone angles from the rank-two solve",
    },
    ExampleInfo { name: "kerr", params: "0 <= p < 1 (default 0.6)", description: "kerr_taub_bolt(p, 1, sqrt(1-p^2), 0)" },
    ExampleInfo { name: "schwarzschild", params: "none", description: "kerr with p = 0" },
    ExampleInfo {
        name: "taub_bolt",
        params: "orientation = +1 or -1 (default +1)",
        description: "kerr_taub_bolt(0, 1, 5/3, orientation*4/3), smooth",
    },
    ExampleInfo {
        name: "chen_teo",
        params: "0 < p < 1 (default 0.5), q = 1 - p",
        description: "kinks q-sqrt(q), 0, sqrt(p)-p with weights q/2, 1/2, p/2 and f(0) = pq",
    },
];

fn violated<T>(reason: String) -> Result<T> {
    Err(Error::ParameterConstraintViolated { reason })
}

fn kerr_taub_bolt(a: f64, b: f64, m: f64, n: f64) -> Result<RodStructure> {
    let angles = solve_cone_angles_r2(a, b, m, n)?.angles;
    if angles.iter().any(|&x| !(x > 0.0)) {
        return violated(format!("cone angles {angles:?} are not all positive"));
    }
    let f = RodFunction::new(m + n, &[(-b, (b - a) / (2.0 * b)), (b, (b + a) / (2.0 * b))])?;
    RodStructure::new(f, angles.to_vec())
}

pub fn build(example: Example) -> Result<RodStructure> {
    match example {
        Example::TaubNut { n } => {
            if !(n > 0.0 && n.is_finite()) {
                return violated(format!("n = {n} must be positive"));
            }
            Ok(RodStructure::unit(RodFunction::new(2.0 * n, &[(0.0, 1.0)])?))
        }
        Example::KerrTaubBolt { a, b, m, n } => kerr_taub_bolt(a, b, m, n),
        Example::Kerr { p } => {
            if !(0.0..1.0).contains(&p) {
                return violated(format!("p = {p} must lie in [0, 1)"));
            }
            kerr_taub_bolt(p, 1.0, (1.0 - p * p).sqrt(), 0.0)
        }
        Example::Schwarzschild => kerr_taub_bolt(0.0, 1.0, 1.0, 0.0),
        Example::TaubBolt { positive } => {
            let n = if positive { 4.0 / 3.0 } else { -4.0 / 3.0 };
            kerr_taub_bolt(0.0, 1.0, 5.0 / 3.0, n)
        }
        Example::ChenTeo { p } => {
            if !(p > 0.0 && p < 1.0) {
                return violated(format!("p = {p} must lie in (0, 1)"));
            }
            let q = 1.0 - p;
            let k = 1.0 - p.powf(1.5) - q.powf(1.5);
            let f = RodFunction::new(k / 2.0, &[(q - q.sqrt(), q / 2.0), (0.0, 0.5), (p.sqrt() - p, p / 2.0)])?;
            Ok(RodStructure::unit(f))
        }
    }
}

/// Build a family by name from `key = value` parameters.
pub fn make_example(name: &str, params: &[(String, f64)]) -> Result<RodStructure> {
    let get = |key: &str, default: Option<f64>| -> Result<f64> {
        match params.iter().rev().find(|(k, _)| k == key) {
            Some((_, v)) => Ok(*v),
            None => default.ok_or_else(|| Error::ParameterConstraintViolated {
                reason: format!("{name} needs parameter '{key}'"),
            }),
        }
    };
    let allowed: &[&str] = match name {
        "taub_nut" => &["n"],
        "kerr_taub_bolt" => &["a", "b", "m", "n"],
        "kerr" | "chen_teo" => &["p"],
        "schwarzschild" => &[],
        "taub_bolt" => &["orientation"],
        _ => return Err(Error::UnknownExample { name: name.to_string() }),
    };
    if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return violated(format!("{name} has no parameter '{k}'"));
    }
    let example = match name {
        "taub_nut" => Example::TaubNut { n: get("n", Some(1.0))? },
        "kerr_taub_bolt" => {
            Example::KerrTaubBolt { a: get("a", None)?, b: get("b", None)?, m: get("m", None)?, n: get("n", None)? }
        }
        "kerr" => Example::Kerr { p: get("p", Some(0.6))? },
        "schwarzschild" => Example::Schwarzschild,
        "taub_bolt" => {
            let o = get("orientation", Some(1.0))?;
            if o != 1.0 && o != -1.0 {
                return violated(format!("orientation = {o} must be +1 or -1"));
            }
            Example::TaubBolt { positive: o > 0.0 }
        }
        _ => Example::ChenTeo { p: get("p", Some(0.5))? },
    };
    build(example)
}
