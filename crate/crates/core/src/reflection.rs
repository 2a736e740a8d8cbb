//! Reflection matrices `K⁻(z)`, `K⁺(z)` and the boundary consistency
//! equations they solve.
//!
//! Both families are built from a hollow "dressing" pattern of cube roots of
//! unity multiplying one rational (K⁻) or polynomial (K⁺) function of `z`.
//! The `*_family` functions take the raw display parameters; the
//! [`KMinusParams`] / [`KPlusParams`] constructors map the public couplings
//! onto them so that the boundary fields come out as
//! `A = i(1 − w² + a)⁻¹` and `B = −i(1 − wʲ + b)⁻¹` (see [`crate::chain`]).

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rmatrix::{curly_r, r21, r_check, r_matrix, CurlyMode};
use crate::spectral::{nonzero, DEFAULT_POLE_EPS};
use crate::tensor::{frobenius, identity, kron, CMatrix, LOCAL_DIM, ONE, ZERO};

/// Classification tolerance on rescaled matrices.
pub const CLASSIFY_TOL: f64 = 1e-8;

/// `|z|` used as a finite stand-in for `z₀ = ∞`.
pub const INFINITY_PROXY: f64 = 1e6;

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// `e^{2πik/3}` with exact real parts.
fn root_of_unity(k: u8) -> Complex64 {
    match k % 3 {
        0 => ONE,
        1 => Complex64::new(-0.5, SQRT3_2),
        _ => Complex64::new(-0.5, -SQRT3_2),
    }
}

/// A cube root of unity `w^k`, `w = e^{2πi/3}`, stored by its exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CubeRoot(u8);

impl CubeRoot {
    pub const ONE: CubeRoot = CubeRoot(0);
    pub const W: CubeRoot = CubeRoot(1);
    pub const W2: CubeRoot = CubeRoot(2);
    pub const ALL: [CubeRoot; 3] = [Self::ONE, Self::W, Self::W2];

    pub fn from_power(k: u8) -> Result<Self> {
        if k > 2 {
            return Err(Error::InvalidParameter(
                "cube-root exponent must be 0, 1 or 2",
            ));
        }
        Ok(Self(k))
    }

    /// Nearest cube root, if `x` lies within `tol` of one.
    pub fn nearest(x: Complex64, tol: f64) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|r| (r.value() - x).norm() <= tol)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn value(self) -> Complex64 {
        root_of_unity(self.0)
    }

    pub fn inv(self) -> Self {
        Self((3 - self.0) % 3)
    }
}

impl core::ops::Mul for CubeRoot {
    type Output = CubeRoot;

    fn mul(self, other: Self) -> Self {
        Self((self.0 + other.0) % 3)
    }
}

/// Choice of primitive cube root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PrimitiveRoot {
    /// `e^{2πi/3}`.
    #[default]
    Primary,
    /// `e^{4πi/3}`.
    Conjugate,
}

impl PrimitiveRoot {
    pub const BOTH: [PrimitiveRoot; 2] = [Self::Primary, Self::Conjugate];

    pub fn root(self) -> CubeRoot {
        match self {
            Self::Primary => CubeRoot::W,
            Self::Conjugate => CubeRoot::W2,
        }
    }

    pub fn value(self) -> Complex64 {
        self.root().value()
    }

    /// `w^k` for integer `k`.
    pub fn pow(self, k: i32) -> Complex64 {
        let e = (self.root().power() as i32 * k).rem_euclid(3);
        root_of_unity(e as u8)
    }
}

/// Parameters of the `K⁻` family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMinusParams {
    pub a: Complex64,
    pub alpha: CubeRoot,
    pub w: PrimitiveRoot,
}

impl KMinusParams {
    pub fn new(a: Complex64, alpha: CubeRoot, w: PrimitiveRoot) -> Self {
        Self { a, alpha, w }
    }

    /// `1 − w² + a`; the left boundary field is `i` over this.
    pub fn coupling(&self) -> Complex64 {
        ONE - self.w.pow(2) + self.a
    }
}

/// Parameters of the `K⁺` family. `tr K⁺(1) ≠ 0` is enforced on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KPlusParams {
    b: Complex64,
    beta: CubeRoot,
    j: u8,
    w: PrimitiveRoot,
}

impl KPlusParams {
    pub fn new(b: Complex64, beta: CubeRoot, j: u8, w: PrimitiveRoot) -> Result<Self> {
        if j != 1 && j != 2 {
            return Err(Error::InvalidParameter("j must be 1 or 2"));
        }
        if !b.is_finite() {
            return Err(Error::InvalidParameter("b must be finite"));
        }
        let p = Self { b, beta, j, w };
        if p.coupling().norm() <= 1e-12 {
            return Err(Error::VanishingTrace);
        }
        Ok(p)
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn beta(&self) -> CubeRoot {
        self.beta
    }

    pub fn j(&self) -> u8 {
        self.j
    }

    pub fn w(&self) -> PrimitiveRoot {
        self.w
    }

    /// `1 − wʲ + b = tr K⁺(1) / 3`.
    pub fn coupling(&self) -> Complex64 {
        ONE - self.w.pow(self.j as i32) + self.b
    }
}

/// Boundary condition at one end of the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryChoice {
    /// `K(z) = I` at all `z`.
    Identity,
    Minus(KMinusParams),
    Plus(KPlusParams),
}

impl BoundaryChoice {
    /// `K(z)` for this choice.
    pub fn matrix(&self, z: Complex64) -> Result<CMatrix> {
        match self {
            Self::Identity => Ok(identity(LOCAL_DIM)),
            Self::Minus(p) => k_minus(z, p),
            Self::Plus(p) => Ok(k_plus(z, p)),
        }
    }

    /// `dK/dz`.
    pub fn deriv(&self, z: Complex64) -> Result<CMatrix> {
        match self {
            Self::Identity => Ok(CMatrix::zeros(LOCAL_DIM, LOCAL_DIM)),
            Self::Minus(p) => k_minus_deriv(z, p),
            Self::Plus(p) => Ok(k_plus_deriv(z, p)),
        }
    }
}

/// `[[1, α, α²], [α²w², 1, αw], [αw², α²w, 1]]` with the diagonal replaced by
/// `diag` and every off-diagonal dressing multiplied by `off`.
fn dressed(diag: Complex64, off: Complex64, alpha: Complex64, w: Complex64) -> CMatrix {
    let a2 = alpha * alpha;
    let w2 = w * w;
    #[rustfmt::skip]
    let m = CMatrix::from_row_slice(3, 3, &[
        diag, alpha * off, a2 * off,
        a2 * w2 * off, diag, alpha * w * off,
        alpha * w2 * off, a2 * w * off, diag,
    ]);
    m
}

/// `K⁻` in display form: unit diagonal, off-diagonal function
/// `(1 − z²)/(w² + a z − z²)` dressed by `α` and `w`. Accepts any `w`,
/// including the non-primitive `w = 1`.
pub fn k_minus_family(
    z: Complex64,
    a: Complex64,
    alpha: Complex64,
    w: Complex64,
) -> Result<CMatrix> {
    let den = w * w + a * z - z * z;
    if den.norm() <= DEFAULT_POLE_EPS {
        return Err(Error::PoleProximity {
            z,
            eps: DEFAULT_POLE_EPS,
        });
    }
    Ok(dressed(ONE, (ONE - z * z) / den, alpha, w))
}

/// `K⁻(z)`. The coupling enters the denominator as `w² − a z − z²`, so that
/// `K⁻(1) = I` and `(i/2) K⁻'(1) = i(1 − w² + a)⁻¹ × dressing`.
pub fn k_minus(z: Complex64, p: &KMinusParams) -> Result<CMatrix> {
    k_minus_family(z, -p.a, p.alpha.value(), p.w.value())
}

/// `dK⁻/dz` in closed form.
pub fn k_minus_deriv(z: Complex64, p: &KMinusParams) -> Result<CMatrix> {
    let w2 = p.w.pow(2);
    let den = w2 - p.a * z - z * z;
    if den.norm() <= DEFAULT_POLE_EPS {
        return Err(Error::PoleProximity {
            z,
            eps: DEFAULT_POLE_EPS,
        });
    }
    let num = ONE - z * z;
    let d_off = (-2.0 * z * den + num * (p.a + 2.0 * z)) / (den * den);
    Ok(dressed(ZERO, d_off, p.alpha.value(), p.w.value()))
}

/// `lim_{z→∞} K⁻(z)`: the off-diagonal function tends to 1.
pub fn k_minus_at_infinity(p: &KMinusParams) -> CMatrix {
    dressed(ONE, ONE, p.alpha.value(), p.w.value())
}

/// `K⁺` in display form: diagonal `1 + bz − wʲz²`, off-diagonal
/// `1 − w^{2j}z²` dressed by `β` and `wʲ`.
pub fn k_plus_family(
    z: Complex64,
    b: Complex64,
    beta: Complex64,
    j: u8,
    w: PrimitiveRoot,
) -> CMatrix {
    let wj = w.pow(j as i32);
    let w2j = w.pow(2 * j as i32);
    let diag = ONE + b * z - wj * z * z;
    let off = ONE - w2j * z * z;
    // Dressing pattern with wʲ playing the role of w: (2,1) carries w^{2j}β².
    dressed(diag, off, beta, wj)
}

/// `K⁺(z)`. The dressing root enters as `β̄ = β²`, which puts `β` (not `β²`)
/// on entry (1,2) of the right boundary field.
pub fn k_plus(z: Complex64, p: &KPlusParams) -> CMatrix {
    k_plus_family(z, p.b, p.beta.inv().value(), p.j, p.w)
}

/// `dK⁺/dz`.
pub fn k_plus_deriv(z: Complex64, p: &KPlusParams) -> CMatrix {
    let wj = p.w.pow(p.j as i32);
    let w2j = p.w.pow(2 * p.j as i32);
    dressed(p.b - 2.0 * wj * z, -2.0 * w2j * z, p.beta.inv().value(), wj)
}

fn check_local(k: &CMatrix) -> Result<()> {
    if k.nrows() != LOCAL_DIM || k.ncols() != LOCAL_DIM {
        return Err(Error::DimensionMismatch {
            expected: LOCAL_DIM,
            found: k.nrows(),
        });
    }
    Ok(())
}

/// Residual of `R₁₂(x/y) K₁(x) R₂₁(xy) K₂(y) = K₂(y) R₁₂(xy) K₁(x) R₂₁(x/y)`
/// for an arbitrary matrix function `k`.
pub fn re_minus_residual_with<F>(k: F, x: Complex64, y: Complex64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<CMatrix>,
{
    let y = nonzero(y)?;
    let (kx, ky) = (k(x)?, k(y)?);
    check_local(&kx)?;
    check_local(&ky)?;
    let id = identity(LOCAL_DIM);
    let k1 = kron(&kx, &id);
    let k2 = kron(&id, &ky);
    let lhs = r_matrix(x / y)? * &k1 * r21(x * y)? * &k2;
    let rhs = &k2 * r_matrix(x * y)? * &k1 * r21(x / y)?;
    Ok(frobenius(&(lhs - rhs)))
}

/// Residual of `R₁₂(y/x) K₁(x) 𝓡₂₁(xy) K₂(y) = K₂(y) 𝓡₁₂(xy) K₁(x) R₂₁(y/x)`.
pub fn re_plus_residual_with<F>(k: F, x: Complex64, y: Complex64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<CMatrix>,
{
    let x = nonzero(x)?;
    let (kx, ky) = (k(x)?, k(y)?);
    check_local(&kx)?;
    check_local(&ky)?;
    let id = identity(LOCAL_DIM);
    let k1 = kron(&kx, &id);
    let k2 = kron(&id, &ky);
    let curly = curly_r(x * y, CurlyMode::ClosedForm)?;
    let curly21 = crate::tensor::swap_spaces(&curly, LOCAL_DIM)?;
    let lhs = r_matrix(y / x)? * &k1 * curly21 * &k2;
    let rhs = &k2 * curly * &k1 * r21(y / x)?;
    Ok(frobenius(&(lhs - rhs)))
}

pub fn re_minus_residual(p: &KMinusParams, x: Complex64, y: Complex64) -> Result<f64> {
    re_minus_residual_with(|z| k_minus(z, p), x, y)
}

pub fn re_plus_residual(p: &KPlusParams, x: Complex64, y: Complex64) -> Result<f64> {
    re_plus_residual_with(|z| Ok(k_plus(z, p)), x, y)
}

/// Residual of `K₂(y) Ř₁₂(0) K₂(z₀) Ř₁₂(0) = Ř₁₂(0) K₂(z₀) Ř₁₂(0) K₂(y)`.
pub fn special_re_residual(k_at_y: &CMatrix, k_at_z0: &CMatrix) -> Result<f64> {
    check_local(k_at_y)?;
    check_local(k_at_z0)?;
    let rc = r_check(ZERO)?;
    let id = identity(LOCAL_DIM);
    let ky = kron(&id, k_at_y);
    let kz = kron(&id, k_at_z0);
    let middle = &rc * kz * &rc;
    Ok(frobenius(&(&ky * &middle - &middle * &ky)))
}

/// Largest violation of the componentwise form of the special equation,
/// `h_{i,j}(z₀) h_{k,l}(y) = h_{i,j+k+2l}(z₀) h_{2i+2k,2i+2l}(y)`, indices
/// taken modulo 3.
pub fn index_law_residual(k_at_y: &CMatrix, k_at_z0: &CMatrix) -> Result<f64> {
    check_local(k_at_y)?;
    check_local(k_at_z0)?;
    // 1-based index n maps to storage (n − 1) mod 3.
    let h = |m: &CMatrix, i: usize, j: usize| m[((i + 2) % 3, (j + 2) % 3)];
    let mut worst = 0.0f64;
    for i in 1..=3 {
        for j in 1..=3 {
            for k in 1..=3 {
                for l in 1..=3 {
                    let lhs = h(k_at_z0, i, j) * h(k_at_y, k, l);
                    let rhs =
                        h(k_at_z0, i, j + k + 2 * l) * h(k_at_y, 2 * i + 2 * k, 2 * i + 2 * l);
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Canonical form with all three diagonal entries nonzero at `z₀`:
/// `[[A, αB, α²B], [β²B, A, βB], [γB, γ²B, A]]`, `αβγ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThreeDiagonalForm {
    pub alpha: CubeRoot,
    pub beta: CubeRoot,
    pub gamma: CubeRoot,
}

impl ThreeDiagonalForm {
    /// Fixes `γ = (αβ)⁻¹`.
    pub fn new(alpha: CubeRoot, beta: CubeRoot) -> Self {
        Self {
            alpha,
            beta,
            gamma: (alpha * beta).inv(),
        }
    }

    pub fn matrix(&self, a: Complex64, b: Complex64) -> CMatrix {
        let (al, be, ga) = (self.alpha.value(), self.beta.value(), self.gamma.value());
        #[rustfmt::skip]
        let m = CMatrix::from_row_slice(3, 3, &[
            a, al * b, al * al * b,
            be * be * b, a, be * b,
            ga * b, ga * ga * b, a,
        ]);
        m
    }
}

/// Canonical form with a single nonzero diagonal entry at `z₀`:
/// `[[A, αB, α²B], [αD, C, E], [D, αE, C]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneDiagonalForm {
    pub alpha: CubeRoot,
}

impl OneDiagonalForm {
    pub fn matrix(
        &self,
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
        e: Complex64,
    ) -> CMatrix {
        let al = self.alpha.value();
        #[rustfmt::skip]
        let m = CMatrix::from_row_slice(3, 3, &[
            a, al * b, al * al * b,
            al * d, c, e,
            d, al * e, c,
        ]);
        m
    }
}

/// Structural class of `K(z₀)` for a solution of the special equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KClass {
    ScalarIdentity,
    Diagonal,
    ThreeDiagonalNonzero(ThreeDiagonalForm),
    /// `pivot` is the 1-based index of the nonzero diagonal entry.
    OneDiagonalNonzero {
        pivot: usize,
        form: OneDiagonalForm,
    },
    Inconsistent,
}

/// Classifies `K(z₀)` by its count of nonzero diagonal entries and checks the
/// matching canonical form. The matrix is rescaled so its largest entry has
/// modulus one before comparing against `tol`.
pub fn classify_k_at_z0(k0: &CMatrix, tol: f64) -> Result<KClass> {
    check_local(k0)?;
    let scale = k0.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if scale == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let k = k0.unscale(scale);
    let nonzero_diag: alloc::vec::Vec<usize> = (0..3).filter(|&i| k[(i, i)].norm() > tol).collect();
    let off_zero = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .all(|(i, j)| k[(i, j)].norm() <= tol);
    let close = |a: Complex64, b: Complex64| (a - b).norm() <= tol;

    match nonzero_diag.len() {
        3 => {
            let d = k[(0, 0)];
            if !close(k[(1, 1)], d) || !close(k[(2, 2)], d) {
                return Ok(if off_zero {
                    KClass::Diagonal
                } else {
                    KClass::Inconsistent
                });
            }
            if off_zero {
                return Ok(KClass::ScalarIdentity);
            }
            let n = k.map(|v| v / d);
            let root = |v: Complex64| CubeRoot::nearest(v, tol);
            let (Some(alpha), Some(beta), Some(gamma)) =
                (root(n[(0, 1)]), root(n[(1, 2)]), root(n[(2, 0)]))
            else {
                return Ok(KClass::Inconsistent);
            };
            let form = ThreeDiagonalForm::new(alpha, beta);
            if form.gamma != gamma || (form.matrix(ONE, ONE) - &n).norm() > tol {
                return Ok(KClass::Inconsistent);
            }
            Ok(KClass::ThreeDiagonalNonzero(form))
        }
        1 => {
            if off_zero {
                return Ok(KClass::Diagonal);
            }
            // Relabel cyclically so the pivot sits at (1,1); Ř(0) is invariant.
            let p = nonzero_diag[0];
            let rotated = CMatrix::from_fn(3, 3, |i, j| k[((i + p) % 3, (j + p) % 3)]);
            let n = rotated.map(|v| v / rotated[(0, 0)]);
            let Some(alpha) = CubeRoot::nearest(n[(0, 1)], tol) else {
                return Ok(KClass::Inconsistent);
            };
            let form = OneDiagonalForm { alpha };
            if (form.matrix(ONE, ONE, ZERO, ZERO, ZERO) - &n).norm() > tol {
                return Ok(KClass::Inconsistent);
            }
            Ok(KClass::OneDiagonalNonzero { pivot: p + 1, form })
        }
        _ => Ok(KClass::Inconsistent),
    }
}

/// Angle of a primitive root, for callers building sample grids.
pub fn root_angle(w: PrimitiveRoot) -> f64 {
    match w {
        PrimitiveRoot::Primary => 2.0 * PI / 3.0,
        PrimitiveRoot::Conjugate => 4.0 * PI / 3.0,
    }
}
