mod common;

use bqism_core::rmatrix::{
    curly_r, r21, r_matrix, unitarity_product, unitarity_scalar, ybe_residual, CurlyMode,
};
use bqism_core::tensor::{
    frobenius, identity, is_scalar_multiple, partial_transpose, permutation_operator, swap_spaces,
    Space,
};
use common::{spectral, spectral_pair};
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::cases(100))]

    #[test]
    fn unitarity_is_scalar_and_inversion_symmetric(z in spectral()) {
        let check = is_scalar_multiple(&unitarity_product(z).unwrap(), 1e-10);
        prop_assert!(check.is_scalar, "deviation {}", check.deviation);
        let f = unitarity_scalar(z).unwrap();
        let f_inv = unitarity_scalar(z.inv()).unwrap();
        prop_assert!((f - f_inv).norm() < 1e-10);
    }

    #[test]
    fn yang_baxter_holds((x, y) in spectral_pair()) {
        prop_assert!(ybe_residual(x, y).unwrap() < 1e-10);
    }
}

proptest! {
    #![proptest_config(common::cases(50))]

    #[test]
    fn dual_modes_agree(z in spectral()) {
        let closed = curly_r(z, CurlyMode::ClosedForm).unwrap();
        let defined = curly_r(z, CurlyMode::FromDefinition).unwrap();
        prop_assert!(frobenius(&(closed - defined)) < 1e-9);
    }

    #[test]
    fn dual_inverts_partial_transposes(z in spectral()) {
        let curly = curly_r(z, CurlyMode::ClosedForm).unwrap();
        let first = partial_transpose(&curly, Space::First, 3).unwrap()
            * partial_transpose(&r21(z).unwrap(), Space::First, 3).unwrap();
        let curly21 = swap_spaces(&curly, 3).unwrap();
        let second = partial_transpose(&curly21, Space::Second, 3).unwrap()
            * partial_transpose(&r_matrix(z).unwrap(), Space::Second, 3).unwrap();
        prop_assert!(frobenius(&(first - identity(9))) < 1e-10);
        prop_assert!(frobenius(&(second - identity(9))) < 1e-10);
    }
}

#[test]
fn regular_point_gives_flip() {
    let r = r_matrix(common::c(1.0, 0.0)).unwrap();
    assert!(frobenius(&(r - permutation_operator(3))) < 1e-14);
}

#[test]
fn ybe_at_listed_points() {
    let pts = [
        (common::c(1.0, 0.0), common::c(1.0, 0.0)),
        (common::c(2.0, 0.0), common::c(3.0, 1.0)),
        (
            common::c(0.5, 0.0),
            bqism_core::Complex64::from_polar(1.0, std::f64::consts::PI / 5.0),
        ),
    ];
    for (x, y) in pts {
        assert!(ybe_residual(x, y).unwrap() < 1e-10);
    }
}
