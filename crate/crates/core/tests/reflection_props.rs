mod common;

use bqism_core::reflection::{
    classify_k_at_z0, index_law_residual, k_minus, k_minus_at_infinity, k_minus_family, k_plus,
    re_minus_residual, re_minus_residual_with, re_plus_residual, re_plus_residual_with,
    special_re_residual, CubeRoot, KClass, KMinusParams, KPlusParams, OneDiagonalForm,
    PrimitiveRoot, ThreeDiagonalForm, CLASSIFY_TOL, INFINITY_PROXY,
};
use bqism_core::tensor::identity;
use bqism_core::{CMatrix, Complex64, Error};
use common::{c, complex_in, matrix3, spectral, spectral_pair};
use proptest::prelude::*;

fn root() -> impl Strategy<Value = CubeRoot> {
    (0u8..3).prop_map(|k| CubeRoot::from_power(k).unwrap())
}

fn primitive() -> impl Strategy<Value = PrimitiveRoot> {
    prop::sample::select(PrimitiveRoot::BOTH.to_vec())
}

fn k_minus_params() -> impl Strategy<Value = KMinusParams> {
    (complex_in(2.0), root(), primitive()).prop_map(|(a, al, w)| KMinusParams::new(a, al, w))
}

fn k_plus_params() -> impl Strategy<Value = KPlusParams> {
    (complex_in(2.0), root(), 1u8..=2, primitive())
        .prop_filter_map("vanishing trace", |(b, be, j, w)| {
            KPlusParams::new(b, be, j, w).ok()
        })
}

/// Keeps the off-diagonal denominator of `K⁻` away from zero.
fn well_conditioned(p: &KMinusParams, zs: &[Complex64]) -> bool {
    let w2 = p.w.pow(2);
    zs.iter().all(|&z| (w2 - p.a * z - z * z).norm() > 0.1)
}

proptest! {
    #![proptest_config(common::cases(50))]

    #[test]
    fn k_minus_family_reflects(p in k_minus_params(), (x, y) in spectral_pair()) {
        prop_assume!(well_conditioned(&p, &[x, y]));
        prop_assert!(re_minus_residual(&p, x, y).unwrap() < 1e-10);
    }

    #[test]
    fn k_minus_is_identity_at_one(p in k_minus_params()) {
        prop_assume!(well_conditioned(&p, &[c(1.0, 0.0)]));
        let k = k_minus(c(1.0, 0.0), &p).unwrap();
        prop_assert!((k - identity(3)).norm() < 1e-14);
    }

    #[test]
    fn k_plus_family_reflects(p in k_plus_params(), (x, y) in spectral_pair()) {
        prop_assert!(re_plus_residual(&p, x, y).unwrap() < 1e-10);
    }

    #[test]
    fn k_minus_solves_special_equation_at_infinity(p in k_minus_params(), y in spectral()) {
        prop_assume!(well_conditioned(&p, &[y]));
        let ky = k_minus(y, &p).unwrap();
        prop_assert!(special_re_residual(&ky, &k_minus_at_infinity(&p)).unwrap() < 1e-10);
        // The proxy differs from the limit by O(|a| / 1e6).
        let proxy = k_minus(c(INFINITY_PROXY, 0.0), &p).unwrap();
        prop_assert!(special_re_residual(&ky, &proxy).unwrap() < 1e-4);
    }

    #[test]
    fn k_plus_solves_special_equation_at_zero(p in k_plus_params(), y in spectral()) {
        let r = special_re_residual(&k_plus(y, &p), &k_plus(c(0.0, 0.0), &p)).unwrap();
        prop_assert!(r < 1e-10);
    }

    #[test]
    fn index_law_matches_special_equation_on_solutions(
        al in root(), be in root(), a in complex_in(2.0), b in complex_in(2.0),
        p in k_minus_params(), y in spectral(),
    ) {
        prop_assume!(well_conditioned(&p, &[y]));
        let ky = k_minus(y, &p).unwrap();
        let k0 = k_minus_at_infinity(&p);
        prop_assert!(special_re_residual(&ky, &k0).unwrap() < 1e-12);
        prop_assert!(index_law_residual(&ky, &k0).unwrap() < 1e-12);
        // A matrix sharing only the three-diagonal form generally does not
        // pair with K⁻(y); both tests must agree on the verdict.
        let other = ThreeDiagonalForm::new(al, be).matrix(a, b);
        let matrix_ok = special_re_residual(&ky, &other).unwrap() < 1e-12;
        let index_ok = index_law_residual(&ky, &other).unwrap() < 1e-12;
        prop_assert_eq!(matrix_ok, index_ok);
    }

    #[test]
    fn index_law_matches_special_equation_on_random_pairs(ky in matrix3(), k0 in matrix3()) {
        let matrix = special_re_residual(&ky, &k0).unwrap();
        let index = index_law_residual(&ky, &k0).unwrap();
        prop_assert_eq!(matrix < 1e-12, index < 1e-12);
        prop_assert!(matrix > 1e-3 && index > 1e-3);
    }

    #[test]
    fn classifier_finds_three_diagonal_form_at_infinity(p in k_minus_params()) {
        let proxy = k_minus(c(INFINITY_PROXY, 0.0), &p).unwrap();
        let class = classify_k_at_z0(&proxy, 1e-5).unwrap();
        prop_assert!(matches!(class, KClass::ThreeDiagonalNonzero(_)), "{:?}", class);
        let exact = classify_k_at_z0(&k_minus_at_infinity(&p), CLASSIFY_TOL).unwrap();
        prop_assert!(matches!(exact, KClass::ThreeDiagonalNonzero(_)));
    }

    #[test]
    fn classifier_rejects_two_nonzero_diagonal_entries(
        mut m in matrix3(), zero in 0usize..3, d1 in 0.5f64..1.0, d2 in 0.5f64..1.0,
    ) {
        let others: Vec<usize> = (0..3).filter(|&i| i != zero).collect();
        m[(zero, zero)] = c(0.0, 0.0);
        m[(others[0], others[0])] = c(d1, 0.0);
        m[(others[1], others[1])] = c(0.0, d2);
        prop_assert_eq!(classify_k_at_z0(&m, CLASSIFY_TOL).unwrap(), KClass::Inconsistent);
    }

    #[test]
    fn three_diagonal_constructor_closes_the_roots(al in root(), be in root()) {
        let f = ThreeDiagonalForm::new(al, be);
        prop_assert_eq!(f.alpha * f.beta * f.gamma, CubeRoot::ONE);
    }
}

#[test]
fn diagonal_non_scalar_controls_fail() {
    let mut d = CMatrix::zeros(3, 3);
    for i in 0..3 {
        d[(i, i)] = c(i as f64 + 1.0, 0.0);
    }
    let (x, y) = (c(1.3, 0.4), c(0.7, -0.5));
    assert!(re_minus_residual_with(|_| Ok(d.clone()), x, y).unwrap() > 1e-3);
    assert!(re_plus_residual_with(|_| Ok(d.clone()), x, y).unwrap() > 1e-3);
    let s = identity(3) * c(2.0, 0.0);
    assert!(re_minus_residual_with(|_| Ok(s.clone()), x, y).unwrap() < 1e-12);
    assert!(re_plus_residual_with(|_| Ok(s.clone()), x, y).unwrap() < 1e-12);
}

/// `D` and `E` proportional to `B`, with `A(∞) = B(∞) = 1`, `C(∞) = 0`.
#[test]
fn scalar_multiple_one_diagonal_controls_fail_minus() {
    let (x, y) = (c(1.3, 0.4), c(0.7, -0.5));
    for alpha in CubeRoot::ALL {
        for (d, e) in [(0.0, 0.0), (0.5, 0.0), (0.0, -0.3), (0.4, 0.7)] {
            let k = |z: Complex64| {
                let b = (z + 1.0) / (z + 2.0);
                let form = OneDiagonalForm { alpha };
                Ok(form.matrix(c(1.0, 0.0), b, z.inv(), b * d, b * e))
            };
            assert!(re_minus_residual_with(k, x, y).unwrap() > 1e-3);
        }
    }
}

/// `C = D = E = 0` with `B ≠ 0`: the matrix is singular or fails.
#[test]
fn degenerate_one_diagonal_controls_fail_plus() {
    let (x, y) = (c(1.3, 0.4), c(0.7, -0.5));
    for alpha in CubeRoot::ALL {
        let form = OneDiagonalForm { alpha };
        let zero = c(0.0, 0.0);
        let k = |z: Complex64| Ok(form.matrix(c(1.0, 0.0) + z, c(1.0, 0.0) - z, zero, zero, zero));
        let singular = k(x).unwrap().determinant().norm() < 1e-12;
        let fails = re_plus_residual_with(k, x, y).unwrap() > 1e-3;
        assert!(singular || fails);
        assert!(singular);
    }
}

#[test]
fn classifier_examples() {
    assert_eq!(
        classify_k_at_z0(&identity(3), CLASSIFY_TOL).unwrap(),
        KClass::ScalarIdentity
    );
    let one = OneDiagonalForm { alpha: CubeRoot::W };
    let zero = c(0.0, 0.0);
    let m = one.matrix(c(1.0, 0.0), c(1.0, 0.0), zero, zero, zero);
    assert!(matches!(
        classify_k_at_z0(&m, CLASSIFY_TOL).unwrap(),
        KClass::OneDiagonalNonzero { pivot: 1, .. }
    ));
    assert!(matches!(
        classify_k_at_z0(&CMatrix::zeros(3, 3), CLASSIFY_TOL),
        Err(Error::ZeroMatrix)
    ));
}

/// `w = 1` is not covered by the family statement; the residual is
/// reported, not asserted.
#[test]
fn non_primitive_root_exploratory() {
    let (x, y) = (c(1.3, 0.4), c(0.7, -0.5));
    let one = c(1.0, 0.0);
    let r = re_minus_residual_with(|z| k_minus_family(z, c(-0.4, 0.2), one, one), x, y).unwrap();
    println!("w = 1 K- reflection residual: {r:.3e}");
    assert!(r.is_finite());
}
