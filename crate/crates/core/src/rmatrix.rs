//! The D(D₃) R-matrix `R(z)` on `C³ ⊗ C³`, its dual `𝓡(z)`, and residual
//! checkers for the identities they satisfy (or fail to satisfy).
//!
//! Off the diagonal ones, every nonzero entry of `R(z)` is one of three
//! rational functions sharing the denominator `z² − z + 1`:
//!
//! ```text
//! hop(z)   = z(z − 1) / (z² − z + 1)
//! cross(z) = z / (z² − z + 1)
//! back(z)  = (1 − z) / (z² − z + 1)
//! ```
//!
//! with `hop + cross + back = 1`. At `z = 1` this gives the flip `P`, at
//! `z = 0` a permutation matrix whose product with `P` is `Ř(0)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{nonzero, SpectralPoint};
use crate::tensor::{
    embed_two_site, frobenius, identity, inverse, is_scalar_multiple, kron, partial_transpose,
    permutation_operator, swap_spaces, CMatrix, Space, LOCAL_DIM, ONE,
};

/// Default relative tolerance for identity residuals.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Entry {
    One,
    Hop,
    Cross,
    Back,
}

/// Nonzero pattern of `R(z)` (1-based row, column).
const R_PATTERN: [(usize, usize, Entry); 21] = [
    (1, 1, Entry::One),
    (2, 3, Entry::Hop),
    (2, 4, Entry::Cross),
    (2, 8, Entry::Back),
    (3, 2, Entry::Hop),
    (3, 6, Entry::Back),
    (3, 7, Entry::Cross),
    (4, 2, Entry::Cross),
    (4, 6, Entry::Hop),
    (4, 7, Entry::Back),
    (5, 5, Entry::One),
    (6, 3, Entry::Back),
    (6, 4, Entry::Hop),
    (6, 8, Entry::Cross),
    (7, 3, Entry::Cross),
    (7, 4, Entry::Back),
    (7, 8, Entry::Hop),
    (8, 2, Entry::Back),
    (8, 6, Entry::Cross),
    (8, 7, Entry::Hop),
    (9, 9, Entry::One),
];

fn from_pattern(value: impl Fn(Entry) -> Complex64) -> CMatrix {
    let mut m = CMatrix::zeros(9, 9);
    for &(r, c, e) in R_PATTERN.iter() {
        m[(r - 1, c - 1)] = value(e);
    }
    m
}

/// `R(z)`.
pub fn r_matrix(z: Complex64) -> Result<CMatrix> {
    let z = SpectralPoint::for_r(z)?.value();
    let d = z * z - z + ONE;
    Ok(from_pattern(|e| match e {
        Entry::One => ONE,
        Entry::Hop => z * (z - ONE) / d,
        Entry::Cross => z / d,
        Entry::Back => (ONE - z) / d,
    }))
}

/// `dR/dz`, entrywise in closed form.
///
/// Using `d − z(z − 1) = 1` the three derivatives reduce to
/// `(2z − 1)/d²`, `(1 − z²)/d²` and `z(z − 2)/d²`.
pub fn r_matrix_deriv(z: Complex64) -> Result<CMatrix> {
    let z = SpectralPoint::for_r(z)?.value();
    let d = z * z - z + ONE;
    let d2 = d * d;
    Ok(from_pattern(|e| match e {
        Entry::One => Complex64::new(0.0, 0.0),
        Entry::Hop => (2.0 * z - ONE) / d2,
        Entry::Cross => (ONE - z * z) / d2,
        Entry::Back => z * (z - 2.0) / d2,
    }))
}

/// `Ř(z) = P R(z)`.
pub fn r_check(z: Complex64) -> Result<CMatrix> {
    Ok(permutation_operator(LOCAL_DIM) * r_matrix(z)?)
}

/// `R₂₁(z) = P R(z) P`.
pub fn r21(z: Complex64) -> Result<CMatrix> {
    swap_spaces(&r_matrix(z)?, LOCAL_DIM)
}

/// How to evaluate the dual R-matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurlyMode {
    /// Explicit rational matrix; the production route.
    ClosedForm,
    /// `[(R₂₁^{t₁}(z))⁻¹]^{t₁}` by LU inversion.
    FromDefinition,
}

/// The dual R-matrix `𝓡(z) = [(R₂₁^{t₁}(z))⁻¹]^{t₁}`.
pub fn curly_r(z: Complex64, mode: CurlyMode) -> Result<CMatrix> {
    let z = SpectralPoint::for_curly_r(z)?.value();
    match mode {
        CurlyMode::ClosedForm => Ok(curly_r_closed_form(z)),
        CurlyMode::FromDefinition => {
            let pt = partial_transpose(&r21(z)?, Space::First, LOCAL_DIM)?;
            let inv = inverse(&pt, "partial transpose of R21")?;
            partial_transpose(&inv, Space::First, LOCAL_DIM)
        }
    }
}

fn curly_r_closed_form(z: Complex64) -> CMatrix {
    let z2 = z * z;
    let diag = z2 + ONE;
    let o = Complex64::new(0.0, 0.0);
    let m = -z;
    #[rustfmt::skip]
    let rows = [
        [diag, o, o, o, z, o, o, o, z],
        [o, o, ONE, m, o, o, o, z2, o],
        [o, ONE, o, o, o, z2, m, o, o],
        [o, m, o, o, o, ONE, z2, o, o],
        [z, o, o, o, diag, o, o, o, z],
        [o, o, z2, ONE, o, o, o, m, o],
        [o, o, m, z2, o, o, o, ONE, o],
        [o, z2, o, o, o, m, ONE, o, o],
        [z, o, o, o, z, o, o, o, diag],
    ];
    let prefactor = (z2 - z + ONE) / ((z - ONE) * (z2 * z - ONE));
    CMatrix::from_fn(9, 9, |r, c| prefactor * rows[r][c])
}

/// `R₁₂(z) R₂₁(1/z)`.
pub fn unitarity_product(z: Complex64) -> Result<CMatrix> {
    let z = nonzero(z)?;
    Ok(r_matrix(z)? * r21(z.inv())?)
}

/// The scalar `f(z)` with `R₁₂(z) R₂₁(1/z) = f(z) I`.
///
/// For this R-matrix `f ≡ 1`: entry `(1,1)` of both factors is the only
/// nonzero entry of its row and column.
pub fn unitarity_scalar(z: Complex64) -> Result<Complex64> {
    let product = unitarity_product(z)?;
    let check = is_scalar_multiple(&product, DEFAULT_TOL);
    if !check.is_scalar {
        return Err(Error::NotScalar {
            deviation: check.deviation,
        });
    }
    Ok(check.scalar)
}

/// `‖R₁₂(x/y) R₁₃(x) R₂₃(y) − R₂₃(y) R₁₃(x) R₁₂(x/y)‖_F` on `(C³)^{⊗3}`.
///
/// With `L = R` the intertwining relation is this same equation.
pub fn ybe_residual(x: Complex64, y: Complex64) -> Result<f64> {
    let y = nonzero(y)?;
    let r12 = kron(&r_matrix(x / y)?, &identity(LOCAL_DIM));
    let r13 = embed_two_site(&r_matrix(x)?, 0, 2, 3, LOCAL_DIM)?;
    let r23 = kron(&identity(LOCAL_DIM), &r_matrix(y)?);
    let lhs = &r12 * &r13 * &r23;
    let rhs = &r23 * &r13 * &r12;
    Ok(frobenius(&(lhs - rhs)))
}

/// Relative distance of `R₁₂^{t₁}(λz) M₁ R₂₁^{t₁}(1/z) M₁⁻¹` from the nearest
/// multiple of the identity (least-squares scalar `tr/9`).
pub fn crossing_unitarity_residual(m: &CMatrix, lambda: Complex64, z: Complex64) -> Result<f64> {
    if m.nrows() != LOCAL_DIM || m.ncols() != LOCAL_DIM {
        return Err(Error::DimensionMismatch {
            expected: LOCAL_DIM,
            found: m.nrows(),
        });
    }
    let m_inv = inverse(m, "M")?;
    let z = nonzero(z)?;
    let a = partial_transpose(&r_matrix(lambda * z)?, Space::First, LOCAL_DIM)?;
    let b = partial_transpose(&r21(z.inv())?, Space::First, LOCAL_DIM)?;
    let id = identity(LOCAL_DIM);
    let q = a * kron(m, &id) * b * kron(&m_inv, &id);
    let norm = frobenius(&q);
    if norm == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let scalar = q.trace() / 9.0;
    Ok(frobenius(&(&q - identity(9) * scalar)) / norm)
}
