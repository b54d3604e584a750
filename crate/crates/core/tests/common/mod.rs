#![allow(dead_code)]

use alf_core::RodFunction;
use proptest::prelude::*;

/// Random valid rod functions with `1..=max_rank` kinks.
pub fn rod_function(max_rank: usize) -> impl Strategy<Value = RodFunction> {
    (1..=max_rank)
        .prop_flat_map(|r| {
            (
                0.2f64..3.0,
                -3.0f64..3.0,
                prop::collection::vec(0.3f64..2.0, r - 1),
                prop::collection::vec(0.1f64..1.0, r),
            )
        })
        .prop_map(|(base, z0, gaps, raw)| {
            let total: f64 = raw.iter().sum();
            let mut z = z0;
            let mut kinks = Vec::with_capacity(raw.len());
            for (i, w) in raw.iter().enumerate() {
                if i > 0 {
                    z += gaps[i - 1];
                }
                kinks.push((z, w / total));
            }
            RodFunction::new(base, &kinks).expect("generated rod function is valid")
        })
}

/// A point `(ρ, z)` in the moderate region around the kinks of `f`.
pub fn point_near(f: &RodFunction, u: f64, v: f64) -> (f64, f64) {
    let z = f.positions();
    let rho = 10f64.powf(-1.0 + 2.0 * u);
    let zz = z[0] - 3.0 + (z[z.len() - 1] - z[0] + 6.0) * v;
    (rho, zz)
}
