//! Open chain built from `L = R`: double monodromy, transfer matrix, global
//! Hamiltonian with boundary fields, and dense diagonalization.
//!
//! Tensor ordering puts the auxiliary space first, followed by sites `1..=N`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::reflection::{BoundaryChoice, KMinusParams, KPlusParams, PrimitiveRoot};
use crate::rmatrix::{r21, r_matrix, r_matrix_deriv};
use crate::spectral::nonzero;
use crate::tensor::{
    add_two_site_term, embed_one_site, embed_two_site, frobenius, hermiticity_defect, identity,
    inverse, kron, permutation_operator, pow, swap_spaces, trace_over_aux, CMatrix, I, LOCAL_DIM,
    ONE, ZERO,
};

/// Default cap on the number of sites for dense construction.
pub const DEFAULT_N_MAX: usize = 8;

/// Largest chain for which [`spectrum`] also evaluates `‖[H, t(z)]‖`.
pub const COMMUTATION_PROBE_MAX: usize = 5;

/// Spectral parameter at which [`spectrum`] probes `[H, t(z)]`.
pub const COMMUTATION_PROBE_Z: Complex64 = Complex64::new(1.7, 0.4);

/// Relative hermiticity defect below which the hermitian eigensolver is used.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Chain length, boundary conditions and Hamiltonian normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    sites: usize,
    left: BoundaryChoice,
    right: BoundaryChoice,
    c: Complex64,
}

impl ChainSpec {
    /// Validates the boundary sides (`K⁻` on the left, `K⁺` on the right)
    /// and the dimension cap.
    pub fn new(
        sites: usize,
        left: BoundaryChoice,
        right: BoundaryChoice,
        c: Complex64,
        n_max: usize,
    ) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidParameter("chain needs at least one site"));
        }
        if sites > n_max {
            return Err(Error::DimensionCap { sites, cap: n_max });
        }
        if matches!(left, BoundaryChoice::Plus(_)) {
            return Err(Error::InvalidParameter(
                "left boundary must be identity or K-",
            ));
        }
        if matches!(right, BoundaryChoice::Minus(_)) {
            return Err(Error::InvalidParameter(
                "right boundary must be identity or K+",
            ));
        }
        if !c.is_finite() {
            return Err(Error::InvalidParameter("c must be finite"));
        }
        Ok(Self {
            sites,
            left,
            right,
            c,
        })
    }

    /// `c = i`, the normalization that makes the bulk term hermitian.
    pub fn with_default_c(
        sites: usize,
        left: BoundaryChoice,
        right: BoundaryChoice,
    ) -> Result<Self> {
        Self::new(sites, left, right, I, DEFAULT_N_MAX)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn left(&self) -> BoundaryChoice {
        self.left
    }

    pub fn right(&self) -> BoundaryChoice {
        self.right
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// Hilbert-space dimension `3^N`.
    pub fn dim(&self) -> usize {
        pow(LOCAL_DIM, self.sites)
    }
}

/// `T(z) = R_{aN}(z)…R_{a1}(z) K⁻_a(z) R_{a1}⁻¹(1/z)…R_{aN}⁻¹(1/z)` on
/// `V_a ⊗ V^{⊗N}`.
pub fn double_monodromy(z: Complex64, spec: &ChainSpec) -> Result<CMatrix> {
    let z = nonzero(z)?;
    let factors = spec.sites + 1;
    let r = r_matrix(z)?;
    let r_inv = inverse(&r_matrix(z.inv())?, "R(1/z)")?;
    let mut t = embed_one_site(&spec.left.matrix(z)?, 0, factors)?;
    for site in 1..=spec.sites {
        let l = embed_two_site(&r, 0, site, factors, LOCAL_DIM)?;
        let l_inv = embed_two_site(&r_inv, 0, site, factors, LOCAL_DIM)?;
        t = l * t * l_inv;
    }
    Ok(t)
}

/// `t(z) = tr_a[K⁺_a(z) T(z)]`.
pub fn transfer_matrix(z: Complex64, spec: &ChainSpec) -> Result<CMatrix> {
    let t = double_monodromy(z, spec)?;
    let k = kron(&spec.right.matrix(z)?, &identity(spec.dim()));
    trace_over_aux(&(k * t), LOCAL_DIM)
}

/// Residual of the exchange relation
/// `R₁₂(x/y) T₁₃(x) R₂₁(xy) T₂₃(y) = T₂₃(y) R₁₂(xy) T₁₃(x) R₂₁(x/y)`,
/// where `1, 2` are two auxiliary spaces and `3` is the chain.
pub fn exchange_relation_residual(x: Complex64, y: Complex64, spec: &ChainSpec) -> Result<f64> {
    let y = nonzero(y)?;
    let w = identity(spec.dim());
    let id = identity(LOCAL_DIM);
    let swap = kron(&permutation_operator(LOCAL_DIM), &w);
    let t23 = kron(&id, &double_monodromy(y, spec)?);
    let t13 = &swap * kron(&id, &double_monodromy(x, spec)?) * &swap;
    let r12 = |z: Complex64| r_matrix(z).map(|r| kron(&r, &w));
    let r21_ = |z: Complex64| r21(z).map(|r| kron(&r, &w));
    let lhs = r12(x / y)? * &t13 * r21_(x * y)? * &t23;
    let rhs = &t23 * r12(x * y)? * &t13 * r21_(x / y)?;
    Ok(frobenius(&(lhs - rhs)))
}

/// Construction route for the two-site Hamiltonian density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalHamiltonianMode {
    /// `c P R'(1)`.
    Derivative,
    /// `(c/i) Σ_{γ∈S₃} i(E^{γ1}_{γ2} ⊗ E^{γ2}_{γ3} − E^{γ2}_{γ3} ⊗ E^{γ1}_{γ2})`.
    ExplicitS3,
}

const S3: [[usize; 3]; 6] = [
    [1, 2, 3],
    [1, 3, 2],
    [2, 1, 3],
    [2, 3, 1],
    [3, 1, 2],
    [3, 2, 1],
];

fn s3_sum() -> CMatrix {
    let e = |i, j| crate::tensor::elementary(i, j, LOCAL_DIM);
    let mut h = CMatrix::zeros(9, 9);
    for g in S3.iter() {
        let first = e(g[0], g[1]);
        let second = e(g[1], g[2]);
        h += (kron(&first, &second) - kron(&second, &first)) * I;
    }
    h
}

/// The two-site term `H_{i,i+1}` for normalization `c`.
pub fn local_hamiltonian(mode: LocalHamiltonianMode, c: Complex64) -> Result<CMatrix> {
    match mode {
        LocalHamiltonianMode::Derivative => {
            Ok(permutation_operator(LOCAL_DIM) * r_matrix_deriv(ONE)? * c)
        }
        LocalHamiltonianMode::ExplicitS3 => Ok(s3_sum() * (c / I)),
    }
}

/// `a = i w X⁻¹ + w⁻¹ − 1`.
pub fn hermitian_a(x: f64, w: PrimitiveRoot) -> Result<Complex64> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::ZeroCoupling { name: "X" });
    }
    Ok(I * w.value() / x + w.pow(-1) - ONE)
}

/// `b = wʲ − 1 − i w^{−j} Y⁻¹`.
pub fn hermitian_b(y: f64, j: u8, w: PrimitiveRoot) -> Result<Complex64> {
    if y == 0.0 || !y.is_finite() {
        return Err(Error::ZeroCoupling { name: "Y" });
    }
    let j = j as i32;
    Ok(w.pow(j) - ONE - I * w.pow(-j) / y)
}

/// Boundary couplings `(a, b)` that make the global Hamiltonian hermitian
/// for `c = i`; they give `A = w⁻¹X` and `B = wʲY`.
pub fn hermitian_params(x: f64, y: f64, j: u8, w: PrimitiveRoot) -> Result<(Complex64, Complex64)> {
    Ok((hermitian_a(x, w)?, hermitian_b(y, j, w)?))
}

/// `A = i(1 − w² + a)⁻¹`.
pub fn left_field_strength(p: &KMinusParams) -> Result<Complex64> {
    let k = p.coupling();
    if k.norm() <= 1e-12 {
        return Err(Error::SingularCoupling);
    }
    Ok(I / k)
}

/// `B = −i(1 − wʲ + b)⁻¹`.
pub fn right_field_strength(p: &KPlusParams) -> Complex64 {
    -I / p.coupling()
}

fn hollow(alpha: Complex64, lower: Complex64, upper: Complex64) -> CMatrix {
    let a2 = alpha * alpha;
    #[rustfmt::skip]
    let m = CMatrix::from_row_slice(3, 3, &[
        ZERO, alpha, a2,
        a2 * lower, ZERO, alpha * upper,
        alpha * lower, a2 * upper, ZERO,
    ]);
    m
}

/// Left boundary field `(i/2) K⁻'(1)` in closed form:
/// `A [[0, α, α²], [α²w², 0, αw], [αw², α²w, 0]]`.
pub fn boundary_left_term(p: &KMinusParams) -> Result<CMatrix> {
    let a = left_field_strength(p)?;
    Ok(hollow(p.alpha.value(), p.w.pow(2), p.w.value()) * a)
}

/// Left boundary field from the derivative of `K⁻` at `z = 1`.
pub fn boundary_left_term_by_derivative(p: &KMinusParams) -> Result<CMatrix> {
    if p.coupling().norm() <= 1e-12 {
        return Err(Error::SingularCoupling);
    }
    Ok(crate::reflection::k_minus_deriv(ONE, p)? * (I / 2.0))
}

/// Right boundary field `tr_a(i K⁺_a(1) H_{N,a}) / tr K⁺(1)` in closed form:
/// `B [[0, β, β²], [β²wʲ, 0, βw^{2j}], [βwʲ, β²w^{2j}, 0]]`.
pub fn boundary_right_term(p: &KPlusParams) -> CMatrix {
    let b = right_field_strength(p);
    let j = p.j() as i32;
    hollow(p.beta().value(), p.w().pow(j), p.w().pow(2 * j)) * b
}

/// `tr_a(c K_a(1) H_{N,a}) / tr K(1)` evaluated literally, for any right
/// boundary matrix.
pub fn right_trace_term(k_at_one: &CMatrix, c: Complex64) -> Result<CMatrix> {
    let tr = k_at_one.trace();
    if tr.norm() <= 1e-12 {
        return Err(Error::VanishingTrace);
    }
    // H_{N,a} with the auxiliary factor placed first.
    let h_na = swap_spaces(
        &local_hamiltonian(LocalHamiltonianMode::ExplicitS3, c)?,
        LOCAL_DIM,
    )?;
    let weighted = kron(k_at_one, &identity(LOCAL_DIM)) * h_na;
    Ok(trace_over_aux(&weighted, LOCAL_DIM)? / tr)
}

/// Right boundary field through [`right_trace_term`] with `c = i`.
pub fn boundary_right_term_by_trace(p: &KPlusParams) -> Result<CMatrix> {
    right_trace_term(&crate::reflection::k_plus(ONE, p), I)
}

/// `(c/2) K⁻'(1)` for any left boundary choice.
pub fn left_boundary_field(spec: &ChainSpec) -> Result<CMatrix> {
    Ok(spec.left.deriv(ONE)? * (spec.c / 2.0))
}

/// `tr_a(c K⁺_a(1) H_{N,a}) / tr K⁺(1)` for any right boundary choice.
pub fn right_boundary_field(spec: &ChainSpec) -> Result<CMatrix> {
    right_trace_term(&spec.right.matrix(ONE)?, spec.c)
}

/// `H = Σ H_{i,i+1} + (c/2) K⁻₁'(1) + tr_a(c K⁺_a(1) H_{N,a}) / tr K⁺(1)`.
///
/// Bulk terms use the explicit S₃ sum; identity boundaries are evaluated
/// through the same formulas (the left term vanishes identically).
pub fn global_hamiltonian(spec: &ChainSpec) -> Result<CMatrix> {
    let n = spec.sites;
    let dim = spec.dim();
    let mut h = CMatrix::zeros(dim, dim);
    let local = local_hamiltonian(LocalHamiltonianMode::ExplicitS3, spec.c)?;
    for site in 0..n.saturating_sub(1) {
        add_two_site_term(&mut h, &local, site, site + 1, n, LOCAL_DIM)?;
    }
    h += embed_one_site(&left_boundary_field(spec)?, 0, n)?;
    h += embed_one_site(&right_boundary_field(spec)?, n - 1, n)?;
    Ok(h)
}

/// `t'(1)` by Richardson-extrapolated central differences with step `h`.
pub fn transfer_derivative_at_one(spec: &ChainSpec, h: f64) -> Result<CMatrix> {
    let central = |step: f64| -> Result<CMatrix> {
        let plus = transfer_matrix(ONE + step, spec)?;
        let minus = transfer_matrix(ONE - step, spec)?;
        Ok((plus - minus) / Complex64::new(2.0 * step, 0.0))
    };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok((fine.scale(4.0) - coarse).unscale(3.0))
}

/// `H = c / (2 tr K⁺(1)) [t'(1) − tr K⁺'(1)]`, with `t'(1)` from
/// [`transfer_derivative_at_one`].
pub fn hamiltonian_from_transfer(spec: &ChainSpec, h: f64) -> Result<CMatrix> {
    let tr = spec.right.matrix(ONE)?.trace();
    if tr.norm() <= 1e-12 {
        return Err(Error::VanishingTrace);
    }
    let dt = transfer_derivative_at_one(spec, h)?;
    let shift = identity(spec.dim()) * spec.right.deriv(ONE)?.trace();
    Ok((dt - shift) * (spec.c / (2.0 * tr)))
}

/// `‖[H, t]‖_F / (‖H‖_F ‖t‖_F)`.
pub fn relative_commutator(h: &CMatrix, t: &CMatrix) -> Result<f64> {
    let norm = frobenius(h) * frobenius(t);
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(crate::tensor::commutator_norm(h, t)? / norm)
}

pub fn hamiltonian_transfer_commutation_residual(spec: &ChainSpec, z: Complex64) -> Result<f64> {
    relative_commutator(&global_hamiltonian(spec)?, &transfer_matrix(z, spec)?)
}

/// Eigenvalues and defects of the global Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Ascending by real part, ties by imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// `‖H − H†‖_F / max(1, ‖H‖_F)`.
    pub hermiticity_defect: f64,
    /// Relative `‖[H, t(z)]‖` at [`COMMUTATION_PROBE_Z`]; `None` for chains
    /// longer than [`COMMUTATION_PROBE_MAX`].
    pub commutation_defect: Option<f64>,
    /// Whether the hermitian eigensolver was used.
    pub hermitian: bool,
}

pub fn compare_eigenvalues(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Eigenvalues of an arbitrary square matrix, hermitian path when the
/// relative defect is below `HERMITIAN_TOL`.
pub fn eigenvalues(h: &CMatrix) -> Result<(Vec<Complex64>, f64, bool)> {
    let defect = hermiticity_defect(h) / frobenius(h).max(1.0);
    let hermitian = defect < HERMITIAN_TOL;
    let mut values: Vec<Complex64> = if hermitian {
        let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
        sym.symmetric_eigenvalues()
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect()
    } else {
        h.clone()
            .schur()
            .eigenvalues()
            .ok_or(Error::Singular { what: "Schur form" })?
            .iter()
            .copied()
            .collect()
    };
    values.sort_by(compare_eigenvalues);
    Ok((values, defect, hermitian))
}

pub fn spectrum(spec: &ChainSpec) -> Result<SpectrumResult> {
    let h = global_hamiltonian(spec)?;
    let (eigenvalues, hermiticity_defect, hermitian) = eigenvalues(&h)?;
    let commutation_defect = if spec.sites <= COMMUTATION_PROBE_MAX {
        Some(relative_commutator(
            &h,
            &transfer_matrix(COMMUTATION_PROBE_Z, spec)?,
        )?)
    } else {
        None
    };
    Ok(SpectrumResult {
        eigenvalues,
        hermiticity_defect,
        commutation_defect,
        hermitian,
    })
}
