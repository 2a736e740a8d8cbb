//! Dense complex tensor-algebra primitives.
//!
//! Every operator in the crate (R-matrices, reflection matrices, transfer
//! matrices, Hamiltonians) is a square [`CMatrix`]. Tensor factors follow the
//! usual Kronecker ordering: the basis vector `e_i ⊗ e_j` of `C^d ⊗ C^d` sits at
//! row `d*i + j` (0-based), i.e. row `d(i-1)+j` in 1-based notation.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square dense matrix over complex double precision.
pub type CMatrix = DMatrix<Complex64>;

/// Dimension of the single-site space.
pub const LOCAL_DIM: usize = 3;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tensor factor selector for partial transposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    First,
    Second,
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Elementary matrix `E^i_j` (1-based): a single one in row `i`, column `j`.
pub fn elementary(i: usize, j: usize, d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(i - 1, j - 1)] = ONE;
    m
}

/// Builds a square matrix from row-major entries, checking shape and finiteness.
pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<CMatrix> {
    if dim == 0 {
        return Err(Error::InvalidParameter(
            "matrix dimension must be at least 1",
        ));
    }
    if entries.len() != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            found: entries.len(),
        });
    }
    let m = CMatrix::from_row_slice(dim, dim, entries);
    validate(&m)?;
    Ok(m)
}

/// Row-major copy of the entries.
pub fn to_row_major(m: &CMatrix) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push(m[(r, c)]);
        }
    }
    out
}

/// Checks the matrix invariants: square, nonempty, all entries finite.
pub fn validate(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            if !m[(r, c)].is_finite() {
                return Err(Error::NonFinite {
                    row: r + 1,
                    col: c + 1,
                });
            }
        }
    }
    Ok(())
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Frobenius norm.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

/// Integer `d` such that `d * d == n`, if any.
fn factor_dim(n: usize, d: usize) -> Result<()> {
    if d * d != n {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: n,
        });
    }
    Ok(())
}

/// Partial transpose of an operator on `C^d ⊗ C^d` over one factor.
///
/// `(M^{t1})_{(i,j),(k,l)} = M_{(k,j),(i,l)}` and
/// `(M^{t2})_{(i,j),(k,l)} = M_{(i,l),(k,j)}`.
pub fn partial_transpose(m: &CMatrix, space: Space, d: usize) -> Result<CMatrix> {
    factor_dim(m.nrows(), d)?;
    factor_dim(m.ncols(), d)?;
    Ok(CMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, j) = (row / d, row % d);
        let (k, l) = (col / d, col % d);
        match space {
            Space::First => m[(k * d + j, i * d + l)],
            Space::Second => m[(i * d + l, k * d + j)],
        }
    }))
}

/// The flip `P(v ⊗ w) = w ⊗ v` on `C^d ⊗ C^d`.
pub fn permutation_operator(d: usize) -> CMatrix {
    let mut p = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            p[(j * d + i, i * d + j)] = ONE;
        }
    }
    p
}

/// `M_{21} = P M_{12} P`: the same operator with its two factors exchanged.
pub fn swap_spaces(m: &CMatrix, d: usize) -> Result<CMatrix> {
    factor_dim(m.nrows(), d)?;
    Ok(CMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, j) = (row / d, row % d);
        let (k, l) = (col / d, col % d);
        m[(j * d + i, l * d + k)]
    }))
}

pub(crate) fn pow(base: usize, exp: usize) -> usize {
    (0..exp).fold(1, |acc, _| acc * base)
}

/// Places a two-site operator on sites `site, site+1` (1-based) of an
/// `sites`-site chain: `I^{⊗(site-1)} ⊗ M ⊗ I^{⊗(sites-site-1)}`.
pub fn embed_pair(m: &CMatrix, site: usize, sites: usize, d: usize) -> Result<CMatrix> {
    factor_dim(m.nrows(), d)?;
    if site == 0 || site + 1 > sites {
        return Err(Error::SiteOutOfRange { site, sites });
    }
    let left = identity(pow(d, site - 1));
    let right = identity(pow(d, sites - site - 1));
    Ok(kron(&kron(&left, m), &right))
}

/// Places a single-site operator on factor `factor` (0-based) of `factors`.
pub fn embed_one_site(m: &CMatrix, factor: usize, factors: usize) -> Result<CMatrix> {
    if factor >= factors {
        return Err(Error::SiteOutOfRange {
            site: factor,
            sites: factors,
        });
    }
    let d = m.nrows();
    let left = identity(pow(d, factor));
    let right = identity(pow(d, factors - factor - 1));
    Ok(kron(&kron(&left, m), &right))
}

/// Places a two-site operator on factors `(first, second)` (0-based, any
/// order, not necessarily adjacent). The operator's own first factor acts on
/// `first`.
pub fn embed_two_site(
    m: &CMatrix,
    first: usize,
    second: usize,
    factors: usize,
    d: usize,
) -> Result<CMatrix> {
    let dim = pow(d, factors);
    let mut out = CMatrix::zeros(dim, dim);
    add_two_site_term(&mut out, m, first, second, factors, d)?;
    Ok(out)
}

/// Accumulates a two-site operator acting on factors `(first, second)` into
/// `target` without materializing the embedded matrix.
pub fn add_two_site_term(
    target: &mut CMatrix,
    m: &CMatrix,
    first: usize,
    second: usize,
    factors: usize,
    d: usize,
) -> Result<()> {
    factor_dim(m.nrows(), d)?;
    if first >= factors || second >= factors || first == second {
        return Err(Error::SiteOutOfRange {
            site: first.max(second),
            sites: factors,
        });
    }
    let dim = pow(d, factors);
    if target.nrows() != dim || target.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: target.nrows(),
        });
    }
    let stride_a = pow(d, factors - 1 - first);
    let stride_b = pow(d, factors - 1 - second);
    let nonzero: Vec<(usize, usize, Complex64)> = (0..d * d)
        .flat_map(|r| (0..d * d).map(move |c| (r, c)))
        .filter_map(|(r, c)| {
            let v = m[(r, c)];
            (v != ZERO).then_some((r, c, v))
        })
        .collect();
    for col in 0..dim {
        let ca = (col / stride_a) % d;
        let cb = (col / stride_b) % d;
        let base = col - ca * stride_a - cb * stride_b;
        let local_col = ca * d + cb;
        for &(r, c, v) in &nonzero {
            if c != local_col {
                continue;
            }
            let row = base + (r / d) * stride_a + (r % d) * stride_b;
            target[(row, col)] += v;
        }
    }
    Ok(())
}

/// Partial trace over the first (auxiliary) factor of dimension `d_aux`.
pub fn trace_over_aux(m: &CMatrix, d_aux: usize) -> Result<CMatrix> {
    let n = m.nrows();
    if d_aux == 0 || !n.is_multiple_of(d_aux) || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: d_aux,
            found: n,
        });
    }
    let w = n / d_aux;
    Ok(CMatrix::from_fn(w, w, |r, c| {
        (0..d_aux).map(|a| m[(a * w + r, a * w + c)]).sum()
    }))
}

/// Outcome of [`is_scalar_multiple`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarCheck {
    pub is_scalar: bool,
    /// Mean of the diagonal.
    pub scalar: Complex64,
    /// `‖M − M₁₁·I‖_F / max(1, ‖M‖_F)`.
    pub deviation: f64,
}

pub fn is_scalar_multiple(m: &CMatrix, tol: f64) -> ScalarCheck {
    let n = m.nrows();
    let pivot = m[(0, 0)];
    let mut shifted = m.clone();
    for k in 0..n {
        shifted[(k, k)] -= pivot;
    }
    let deviation = frobenius(&shifted) / frobenius(m).max(1.0);
    let scalar = m.diagonal().sum() / n as f64;
    ScalarCheck {
        is_scalar: deviation <= tol,
        scalar,
        deviation,
    }
}

/// `‖AB − BA‖_F`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    Ok(frobenius(&(a * b - b * a)))
}

/// LU inverse; fails when the matrix is singular or the result overflows.
pub fn inverse(m: &CMatrix, what: &'static str) -> Result<CMatrix> {
    let inv = m.clone().try_inverse().ok_or(Error::Singular { what })?;
    if inv.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular { what });
    }
    Ok(inv)
}

/// Conjugate transpose defect `‖M − M†‖_F`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    frobenius(&(m - m.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(i: usize, d: usize) -> CMatrix {
        let mut v = CMatrix::zeros(d, 1);
        v[(i, 0)] = ONE;
        v
    }

    fn sample(n: usize, seed: u64) -> CMatrix {
        let mut s = seed;
        CMatrix::from_fn(n, n, |_, _| {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let a = ((s >> 33) as f64) / (1u64 << 31) as f64 - 0.5;
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let b = ((s >> 33) as f64) / (1u64 << 31) as f64 - 0.5;
            Complex64::new(a, b)
        })
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&identity(3), &identity(3)), identity(9));
        let e12 = elementary(1, 2, 3);
        assert_eq!(kron(&e12, &identity(1)), e12);
    }

    #[test]
    fn kron_swap_acts_on_basis_vectors() {
        // P_{2x2} ⊗ I_2 maps e_a ⊗ e_b ⊗ e_c to e_b ⊗ e_a ⊗ e_c for all 8 inputs.
        let op = kron(&permutation_operator(2), &identity(2));
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let input = kron(&kron(&basis(a, 2), &basis(b, 2)), &basis(c, 2));
                    let expected = kron(&kron(&basis(b, 2), &basis(a, 2)), &basis(c, 2));
                    assert_eq!(&op * input, expected);
                }
            }
        }
    }

    #[test]
    fn partial_transpose_of_flip() {
        let pt = partial_transpose(&permutation_operator(3), Space::First, 3).unwrap();
        // P = Σ E^i_j ⊗ E^j_i, so P^{t1} = Σ E^j_i ⊗ E^j_i.
        let mut expected = CMatrix::zeros(9, 9);
        for i in 1..=3 {
            for j in 1..=3 {
                expected += kron(&elementary(i, j, 3), &elementary(i, j, 3));
            }
        }
        assert_eq!(pt, expected);
        assert_eq!(
            partial_transpose(&identity(9), Space::First, 3).unwrap(),
            identity(9)
        );
    }

    #[test]
    fn partial_transposes_compose_to_full_transpose() {
        let m = sample(9, 3);
        let both = partial_transpose(
            &partial_transpose(&m, Space::First, 3).unwrap(),
            Space::Second,
            3,
        )
        .unwrap();
        assert_eq!(both, m.transpose());
        let twice = partial_transpose(
            &partial_transpose(&m, Space::First, 3).unwrap(),
            Space::First,
            3,
        )
        .unwrap();
        assert_eq!(twice, m);
    }

    #[test]
    fn partial_transpose_rejects_bad_dims() {
        assert!(matches!(
            partial_transpose(&identity(8), Space::First, 3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn flip_squares_to_identity() {
        let p = permutation_operator(3);
        assert_eq!(&p * &p, identity(9));
        assert_eq!(p.transpose(), p);
        assert_eq!(permutation_operator(1), identity(1));
        let v = kron(&basis(0, 3), &basis(1, 3));
        assert_eq!(&p * v, kron(&basis(1, 3), &basis(0, 3)));
    }

    #[test]
    fn swap_spaces_matches_conjugation_by_flip() {
        let m = sample(9, 11);
        let p = permutation_operator(3);
        assert!((swap_spaces(&m, 3).unwrap() - &p * &m * &p).norm() < 1e-15);
    }

    #[test]
    fn embed_pair_cases() {
        let m = sample(9, 5);
        assert_eq!(embed_pair(&m, 1, 2, 3).unwrap(), m);
        assert_eq!(embed_pair(&identity(9), 2, 3, 3).unwrap(), identity(27));
        assert!(matches!(
            embed_pair(&m, 3, 3, 3),
            Err(Error::SiteOutOfRange { .. })
        ));
        assert!(embed_pair(&m, 0, 3, 3).is_err());
    }

    #[test]
    fn embedded_flips_generate_the_site_cycle() {
        // P_{12} P_{23} sends e_a ⊗ e_b ⊗ e_c to e_c ⊗ e_a ⊗ e_b.
        let p = permutation_operator(3);
        let p12 = embed_pair(&p, 1, 3, 3).unwrap();
        let p23 = embed_pair(&p, 2, 3, 3).unwrap();
        let cycle = &p12 * &p23;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let input = kron(&kron(&basis(a, 3), &basis(b, 3)), &basis(c, 3));
                    let expected = kron(&kron(&basis(c, 3), &basis(a, 3)), &basis(b, 3));
                    assert_eq!(&cycle * input, expected);
                }
            }
        }
    }

    #[test]
    fn embed_two_site_agrees_with_kron_and_flips() {
        let m = sample(9, 7);
        assert_eq!(embed_two_site(&m, 0, 1, 2, 3).unwrap(), m);
        assert_eq!(
            embed_two_site(&m, 1, 2, 3, 3).unwrap(),
            kron(&identity(3), &m)
        );
        // m acting on (2, 0): conjugate by the flip of sites 0 and 2.
        let p = permutation_operator(3);
        let p02 = embed_two_site(&p, 0, 2, 3, 3).unwrap();
        let m20 = embed_two_site(&m, 2, 0, 3, 3).unwrap();
        let m02 = embed_two_site(&m, 0, 2, 3, 3).unwrap();
        assert!((m20 - &p02 * m02 * &p02).norm() < 1e-14);
    }

    #[test]
    fn trace_over_aux_cases() {
        let w = sample(4, 2);
        let tr = trace_over_aux(&kron(&identity(3), &w), 3).unwrap();
        assert!((tr - w.scale(3.0)).norm() < 1e-14);
        assert_eq!(
            trace_over_aux(&permutation_operator(3), 3).unwrap(),
            identity(3)
        );
        assert!(trace_over_aux(&identity(10), 3).is_err());
    }

    #[test]
    fn scalar_multiple_detection() {
        let five = identity(9).scale(5.0);
        let check = is_scalar_multiple(&five, 1e-12);
        assert!(check.is_scalar);
        assert_eq!(check.scalar, Complex64::new(5.0, 0.0));
        assert!(!is_scalar_multiple(&permutation_operator(3), 1e-12).is_scalar);
    }

    #[test]
    fn commutator_of_elementary_matrices() {
        let n = commutator_norm(&elementary(1, 2, 2), &elementary(2, 1, 2)).unwrap();
        assert!((n - 2f64.sqrt()).abs() < 1e-15);
        let a = sample(4, 9);
        assert_eq!(commutator_norm(&identity(4), &a).unwrap(), 0.0);
        assert!(commutator_norm(&a, &(&a * &a)).unwrap() < 1e-14);
        assert!(commutator_norm(&a, &identity(3)).is_err());
    }

    #[test]
    fn construction_checks() {
        assert!(from_row_major(2, &[ONE; 3]).is_err());
        let bad = [ONE, ZERO, Complex64::new(f64::NAN, 0.0), ONE];
        assert!(matches!(
            from_row_major(2, &bad),
            Err(Error::NonFinite { row: 2, col: 1 })
        ));
        let m = from_row_major(2, &[ONE, I, -I, ONE]).unwrap();
        assert_eq!(m[(0, 1)], I);
        assert_eq!(to_row_major(&m), [ONE, I, -I, ONE]);
    }

    #[test]
    fn singular_inverse_is_an_error() {
        assert!(inverse(&CMatrix::zeros(3, 3), "test").is_err());
        assert_eq!(inverse(&identity(3), "test").unwrap(), identity(3));
    }
}
