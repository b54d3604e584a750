//! Search for smooth rod functions of a given rank.
//!
//! With unit angles the lattice relation `v_{j-1} + ε_j v_{j+1} = ℓ_j v_j`
//! splits into a slope recurrence (first component)
//! `f'_{j+1} = ε_j (ℓ_j f'_j - f'_{j-1})` and a value relation (second
//! component). Starting from `f'_0 = -1` the slopes are affine in the free
//! slope `t = f'_1`, with integer coefficients, so the end condition
//! `f'_r = 1` either fixes `t`, leaves it free, or has no solution.
//!
//! The value relations then read, at a vertex with `f'_j ≠ 0`,
//! `f_{j+1}² (f'_{j+1} - f'_j) = ε_j f_j² (f'_j - f'_{j-1})` with
//! `f_{j+1} - f_j` of the sign of `f'_j`; at a flat vertex `ε_j = 1`,
//! `f'_{j+1} = -f'_{j-1}` and the flat edge has length
//! `(2 - ℓ_j) f_j / (2 f'_{j+1})`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::plf::RodFunction;

/// Search bound on `|ℓ_j|`.
pub const CLASSIFY_ELL_BOUND: i64 = 8;
/// Exhaustive search is run up to this rank; beyond it only the slope-sign
/// obstruction is reported.
pub const MAX_SEARCH_RANK: usize = 5;
/// Samples of the free slope on one-parameter branches.
const FAMILY_SAMPLES: usize = 63;

/// Solutions sharing one `(ε, ℓ)` assignment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    pub epsilon: Vec<i8>,
    pub ell: Vec<i64>,
    /// Range of `f'_1` over the accepted samples, when `f'_1` is free.
    pub free_slope: Option<(f64, f64)>,
    /// Accepted rod functions, normalized to `f(z_1) = 1`, `z_1 = 0`.
    pub samples: Vec<RodFunction>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothFamily {
    pub name: String,
    pub branches: Vec<Branch>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub rank: usize,
    pub families: Vec<SmoothFamily>,
    /// Why no family exists, when none does.
    pub obstruction: Option<String>,
    /// Count of `(ε, ℓ)` assignments rejected, by first failed constraint.
    pub rejections: BTreeMap<String, usize>,
    pub searched: usize,
}

const SLOPE_SIGN_OBSTRUCTION: &str = "three successive slopes on one side of zero: the slope relation forces \
     ell_j >= 2 while the value relation forces ell_j f'_j < 2 f'_j";

/// Classify smooth rod functions of rank `r` with unit angles.
pub fn classify_smooth(r: usize) -> Classification {
    classify_smooth_with(r, &vec![None; r.saturating_sub(1)])
}

/// As [`classify_smooth`], with some `ℓ_j` held fixed.
pub fn classify_smooth_with(r: usize, fixed_ell: &[Option<i64>]) -> Classification {
    let mut out = Classification { rank: r, families: Vec::new(), obstruction: None, rejections: BTreeMap::new(), searched: 0 };
    if r == 0 {
        out.obstruction = Some("a rod function needs at least one kink".into());
        return out;
    }
    if r == 1 {
        let f = RodFunction::new(2.0, &[(0.0, 1.0)]).expect("valid");
        out.families.push(SmoothFamily {
            name: "taub_nut".into(),
            branches: vec![Branch { epsilon: vec![], ell: vec![], free_slope: None, samples: vec![f] }],
        });
        return out;
    }
    if r > MAX_SEARCH_RANK {
        out.obstruction = Some(format!("rank {r} > 3: {SLOPE_SIGN_OBSTRUCTION} (exhaustive search skipped)"));
        return out;
    }

    let nv = r - 1;
    let mut branches = Vec::new();
    let span = (2 * CLASSIFY_ELL_BOUND + 1) as usize;
    let total = (1usize << nv) * span.pow(nv as u32);
    for code in 0..total {
        let mut c = code;
        let mut eps = Vec::with_capacity(nv);
        for _ in 0..nv {
            eps.push(if c & 1 == 0 { 1i8 } else { -1 });
            c >>= 1;
        }
        let mut ell = Vec::with_capacity(nv);
        for _ in 0..nv {
            ell.push((c % span) as i64 - CLASSIFY_ELL_BOUND);
            c /= span;
        }
        if fixed_ell.iter().zip(&ell).any(|(f, &l)| matches!(f, Some(x) if *x != l)) {
            continue;
        }
        out.searched += 1;
        match solve_branch(r, &eps, &ell) {
            Ok(b) => branches.push(b),
            Err(reason) => *out.rejections.entry(reason).or_default() += 1,
        }
    }
    out.families = group(r, branches);
    if out.families.is_empty() {
        out.obstruction = Some(if r >= 4 {
            format!("rank {r} > 3: {SLOPE_SIGN_OBSTRUCTION}")
        } else {
            "every (epsilon, ell) assignment violates a constraint".into()
        });
    }
    out
}

fn group(r: usize, branches: Vec<Branch>) -> Vec<SmoothFamily> {
    let mut families: Vec<SmoothFamily> = Vec::new();
    for b in branches {
        let name = match r {
            2 if b.free_slope.is_some() => "kerr",
            2 => "taub_bolt",
            3 => "chen_teo",
            _ => "unidentified",
        };
        match families.iter_mut().find(|f| f.name == name) {
            Some(f) => f.branches.push(b),
            None => families.push(SmoothFamily { name: name.into(), branches: vec![b] }),
        }
    }
    families
}

/// Integer coefficients `(c_j, d_j)` with `f'_j = c_j + d_j t`.
fn slope_coefficients(r: usize, eps: &[i8], ell: &[i64]) -> Vec<(i64, i64)> {
    let mut s = vec![(-1i64, 0i64), (0, 1)];
    for j in 1..r {
        let (e, l) = (eps[j - 1] as i64, ell[j - 1]);
        let (cj, dj) = s[j];
        let (cp, dp) = s[j - 1];
        s.push((e * (l * cj - cp), e * (l * dj - dp)));
    }
    s
}

fn solve_branch(r: usize, eps: &[i8], ell: &[i64]) -> Result<Branch, String> {
    let co = slope_coefficients(r, eps, ell);
    let (cr, dr) = co[r];
    if dr != 0 {
        // exact slopes num_j / dr
        let num: Vec<i64> = co.iter().map(|&(c, d)| c * dr + d * (1 - cr)).collect();
        let slopes: Vec<f64> = num.iter().map(|&n| if n == 0 { 0.0 } else { n as f64 / dr as f64 }).collect();
        let f = rod_from_slopes(&slopes, eps, ell)?;
        return Ok(Branch { epsilon: eps.to_vec(), ell: ell.to_vec(), free_slope: None, samples: vec![f] });
    }
    if cr != 1 {
        return Err("slope recurrence cannot reach f'_r = 1".into());
    }
    // f'_1 = t free: intersect the monotonicity constraints
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for j in 0..r {
        let (a, b) = (co[j + 1].0 - co[j].0, co[j + 1].1 - co[j].1);
        // a + b t > 0
        if b == 0 {
            if a <= 0 {
                return Err("slopes not strictly increasing".into());
            }
        } else if b > 0 {
            lo = lo.max(-a as f64 / b as f64);
        } else {
            hi = hi.min(-a as f64 / b as f64);
        }
    }
    if !(lo < hi) {
        return Err("slopes not strictly increasing".into());
    }
    let mut ts: Vec<f64> = (1..=FAMILY_SAMPLES).map(|k| lo + (hi - lo) * k as f64 / (FAMILY_SAMPLES + 1) as f64).collect();
    for &(c, d) in &co[1..r] {
        if d != 0 {
            let t0 = -c as f64 / d as f64;
            if t0 > lo && t0 < hi {
                ts.push(t0);
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    let mut samples = Vec::new();
    let mut accepted = Vec::new();
    let mut first_err = None;
    for t in ts {
        let slopes: Vec<f64> = co
            .iter()
            .map(|&(c, d)| {
                let v = c as f64 + d as f64 * t;
                if d != 0 && t == -c as f64 / d as f64 {
                    0.0
                } else {
                    v
                }
            })
            .collect();
        match rod_from_slopes(&slopes, eps, ell) {
            Ok(f) => {
                samples.push(f);
                accepted.push(t);
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    if samples.is_empty() {
        return Err(first_err.unwrap_or_else(|| "no admissible free slope".into()));
    }
    let range = (accepted[0], *accepted.last().expect("nonempty"));
    Ok(Branch { epsilon: eps.to_vec(), ell: ell.to_vec(), free_slope: Some(range), samples })
}

/// Values and positions from the value relations, normalized by `f_1 = 1`, `z_1 = 0`.
fn rod_from_slopes(slopes: &[f64], eps: &[i8], ell: &[i64]) -> Result<RodFunction, String> {
    let r = slopes.len() - 1;
    if slopes.windows(2).any(|w| !(w[1] > w[0])) {
        return Err("slopes not strictly increasing".into());
    }
    let mut values = vec![1.0];
    let mut z = vec![0.0];
    for j in 1..r {
        let (sp, s, sn) = (slopes[j - 1], slopes[j], slopes[j + 1]);
        let fj = values[j - 1];
        let (fnext, dz) = if s != 0.0 {
            if eps[j - 1] != 1 {
                return Err("value relation needs epsilon = +1".into());
            }
            let fnext = fj * ((s - sp) / (sn - s)).sqrt();
            let dz = (fnext - fj) / s;
            if !(dz > 0.0) {
                return Err("kink values contradict the slope sign (three slopes on one side of zero)".into());
            }
            (fnext, dz)
        } else {
            // the slope recurrence already gives sn = -eps sp
            if eps[j - 1] != 1 {
                return Err("flat vertex needs epsilon = +1".into());
            }
            let gap = (2.0 - ell[j - 1] as f64) * fj / (2.0 * sn);
            if !(gap > 0.0) {
                return Err("flat edge length must be positive (ell < 2)".into());
            }
            (fj, gap)
        };
        values.push(fnext);
        z.push(z[j - 1] + dz);
    }
    RodFunction::from_samples(slopes, &z, 1.0).map_err(|e| match e {
        crate::error::Error::NonPositiveA { .. } => "constant A must be positive".to_string(),
        other => other.to_string(),
    })
}
