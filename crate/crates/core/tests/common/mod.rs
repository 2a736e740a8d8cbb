#![allow(dead_code)]

use std::f64::consts::PI;

use bqism_core::Complex64;
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Poles of `R(z)`, `𝓡(z)` and the regular point, kept at a distance.
fn poles() -> [Complex64; 5] {
    [
        c(1.0, 0.0),
        Complex64::from_polar(1.0, PI / 3.0),
        Complex64::from_polar(1.0, -PI / 3.0),
        Complex64::from_polar(1.0, 2.0 * PI / 3.0),
        Complex64::from_polar(1.0, 4.0 * PI / 3.0),
    ]
}

pub fn admissible(z: Complex64) -> bool {
    z.is_finite() && z.norm() > 1e-3 && poles().iter().all(|p| (z - p).norm() > 0.05)
}

/// `log|z|` uniform on `[ln 0.2, ln 5]`, phase uniform.
pub fn spectral() -> impl Strategy<Value = Complex64> {
    ((0.2f64).ln()..(5.0f64).ln(), 0.0..2.0 * PI)
        .prop_map(|(r, t)| Complex64::from_polar(r.exp(), t))
        .prop_filter("near a pole", |z| admissible(*z))
}

/// A pair `(x, y)` with `x/y`, `xy`, `y/x` and `1/x`, `1/y` all admissible.
pub fn spectral_pair() -> impl Strategy<Value = (Complex64, Complex64)> {
    (spectral(), spectral()).prop_filter("compound argument near a pole", |(x, y)| {
        [x / y, x * y, y / x, x.inv(), y.inv()]
            .iter()
            .all(|z| admissible(*z))
    })
}

pub fn complex_in(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| c(re, im))
}

pub fn matrix3() -> impl Strategy<Value = bqism_core::CMatrix> {
    prop::collection::vec(complex_in(1.0), 9)
        .prop_map(|v| bqism_core::CMatrix::from_row_slice(3, 3, &v))
}

/// Seeds come from proptest's own RNG; failures are shrunk and printed but not
/// written next to the sources.
pub fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}
