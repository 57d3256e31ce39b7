#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use spinorbit::PeriodicFunction;

/// Grid used to approximate sup norms of trigonometric polynomials.
pub const FINE_GRID: usize = 16384;

/// Zero-mean real trigonometric polynomial of degree `1..=max_degree` with
/// coefficients in `[-1, 1]^2`.
pub fn trig_polynomial(max_degree: usize) -> impl Strategy<Value = PeriodicFunction> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_degree).prop_map(|c| {
        let positive: Vec<_> = c
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        PeriodicFunction::from_coefficients(0.0, &positive)
    })
}

pub fn sup(f: &PeriodicFunction) -> f64 {
    f.sup_norm_on(FINE_GRID).unwrap()
}

pub fn body(name: &str) -> spinorbit::Body {
    spinorbit::catalog::Bundled::All
        .load()
        .into_iter()
        .chain(spinorbit::catalog::Bundled::MinorBodies.load())
        .find(|b| b.name == name)
        .unwrap_or_else(|| panic!("{name} is not bundled"))
}
