//! Residual suites behind `bqism verify <target>`.

use std::time::Instant;

use bqism_core::chain::{
    global_hamiltonian, relative_commutator, transfer_matrix, ChainSpec, DEFAULT_N_MAX,
};
use bqism_core::reflection::{
    index_law_residual, k_minus, k_minus_at_infinity, k_plus, re_minus_residual_with,
    re_plus_residual_with, special_re_residual, CubeRoot, KMinusParams, KPlusParams,
    OneDiagonalForm, PrimitiveRoot,
};
use bqism_core::rmatrix::{
    crossing_unitarity_residual, curly_r, r21, r_matrix, unitarity_product, unitarity_scalar,
    ybe_residual, CurlyMode,
};
use bqism_core::tensor::{
    frobenius, identity, is_scalar_multiple, partial_transpose, swap_spaces, Space,
};
use bqism_core::{CMatrix, Complex64};
use clap::ValueEnum;

use crate::error::{invalid, AppResult};
use crate::format::{ChainSpecJson, ParamJson, ParamKind};
use crate::report::{InputValue, ResidualReport, Sample};
use crate::sampling::{k_minus_well_conditioned, Sampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Ybe,
    Unitarity,
    Dual,
    Crossing,
    ReMinus,
    RePlus,
    Special,
    TransferCommute,
    HamCommute,
}

impl Target {
    pub fn default_samples(self) -> usize {
        match self {
            Self::Ybe | Self::Unitarity => 100,
            Self::Dual | Self::ReMinus | Self::RePlus | Self::Special => 50,
            Self::TransferCommute => 20,
            Self::HamCommute => 5,
            Self::Crossing => 0,
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Self::Dual | Self::TransferCommute => 1e-9,
            Self::HamCommute => 1e-8,
            Self::Crossing => CROSSING_THRESHOLD,
            _ => 1e-10,
        }
    }

    pub fn identity_name(self) -> &'static str {
        match self {
            Self::Ybe => "yang-baxter",
            Self::Unitarity => "unitarity",
            Self::Dual => "dual-r-matrix",
            Self::Crossing => "crossing-unitarity",
            Self::ReMinus => "reflection-minus",
            Self::RePlus => "reflection-plus",
            Self::Special => "special-reflection",
            Self::TransferCommute => "transfer-commutativity",
            Self::HamCommute => "hamiltonian-transfer-commutativity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Grid {
    /// 50 diagonal and 20 dense `M`, 24 values of `λ`.
    #[default]
    Default,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub samples: Option<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub params: Option<String>,
    pub grid: Grid,
    pub n_max: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            samples: None,
            seed: 0,
            tol: None,
            params: None,
            grid: Grid::Default,
            n_max: DEFAULT_N_MAX,
        }
    }
}

pub fn run(target: Target, opts: &VerifyOptions) -> AppResult<ResidualReport> {
    let tol = opts.tol.unwrap_or(target.default_tolerance());
    if !(tol.is_finite() && tol >= 0.0) {
        return invalid("tolerance must be finite and non-negative");
    }
    let n = opts.samples.unwrap_or(target.default_samples());
    if n == 0 && target != Target::Crossing {
        return invalid("--samples must be positive");
    }
    let mut sampler = Sampler::new(opts.seed);
    let start = Instant::now();
    let mut report = match target {
        Target::Ybe => judged(target, ybe(&mut sampler, n)?, tol, opts.seed),
        Target::Unitarity => judged(target, unitarity(&mut sampler, n)?, tol, opts.seed),
        Target::Dual => judged(target, dual(&mut sampler, n)?, tol, opts.seed),
        Target::Crossing => crossing(&mut sampler, opts.grid, tol, opts.seed)?,
        Target::ReMinus => re_minus(&mut sampler, n, tol, opts)?,
        Target::RePlus => re_plus(&mut sampler, n, tol, opts)?,
        Target::Special => special(&mut sampler, n, tol, opts)?,
        Target::TransferCommute => transfer_commute(&mut sampler, n, tol, opts)?,
        Target::HamCommute => ham_commute(&mut sampler, n, tol, opts)?,
    };
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

fn judged(target: Target, samples: Vec<Sample>, tol: f64, seed: u64) -> ResidualReport {
    ResidualReport::judged(target.identity_name(), samples, tol, seed)
}

fn ybe(s: &mut Sampler, n: usize) -> AppResult<Vec<Sample>> {
    (0..n)
        .map(|_| {
            let (x, y) = s.spectral_pair();
            Ok(Sample::new(
                [("x", x.into()), ("y", y.into())],
                ybe_residual(x, y)?,
            ))
        })
        .collect()
}

/// Residual: larger of the scalar deviation of `R₁₂(z)R₂₁(1/z)` and
/// `|f(z) − f(1/z)|`.
fn unitarity(s: &mut Sampler, n: usize) -> AppResult<Vec<Sample>> {
    (0..n)
        .map(|_| {
            let z = s.spectral();
            let deviation = is_scalar_multiple(&unitarity_product(z)?, 0.0).deviation;
            let f = unitarity_scalar(z)?;
            let symmetry = (f - unitarity_scalar(z.inv())?).norm();
            Ok(Sample::new(
                [("z", z.into()), ("f", f.into())],
                deviation.max(symmetry),
            ))
        })
        .collect()
}

/// Residual: larger of the closed-form/definition mismatch of `𝓡` and the
/// deviations of both partial-transpose products from `I₉`.
fn dual(s: &mut Sampler, n: usize) -> AppResult<Vec<Sample>> {
    (0..n)
        .map(|_| {
            let z = s.spectral();
            Ok(Sample::new([("z", z.into())], dual_residual(z)?))
        })
        .collect()
}

pub fn dual_residual(z: Complex64) -> AppResult<f64> {
    let closed = curly_r(z, CurlyMode::ClosedForm)?;
    let defined = curly_r(z, CurlyMode::FromDefinition)?;
    let first = partial_transpose(&closed, Space::First, 3)?
        * partial_transpose(&r21(z)?, Space::First, 3)?;
    let second = partial_transpose(&swap_spaces(&closed, 3)?, Space::Second, 3)?
        * partial_transpose(&r_matrix(z)?, Space::Second, 3)?;
    let id = identity(9);
    Ok(frobenius(&(closed - defined))
        .max(frobenius(&(first - &id)))
        .max(frobenius(&(second - &id))))
}

/// A candidate with residual below this would be a crossing-unitarity pair.
pub const CROSSING_THRESHOLD: f64 = 1e-2;

/// Fixed spectral points; the condition must hold for every `z`, so each
/// candidate's residual is the worst over them.
pub const CROSSING_PROBES: [Complex64; 3] = [
    Complex64::new(1.3, 0.4),
    Complex64::new(0.6, -0.7),
    Complex64::new(2.1, 0.5),
];

pub struct CrossingCandidate {
    pub label: String,
    pub m: CMatrix,
    pub lambda: Complex64,
}

/// `diag(1, μ, ν)` for `μ ∈ {1/4, 1/2, 1, 2, 4}` and `ν` on the ten tenth
/// roots of unity, plus 20 seeded dense `M` with `|det M| > 0.05`; each
/// paired with 12 phases of `λ` on `|λ| = 1` and on `|λ| = 2`.
pub fn crossing_grid(s: &mut Sampler) -> Vec<CrossingCandidate> {
    let mut ms: Vec<(String, CMatrix)> = Vec::new();
    for mu in [0.25, 0.5, 1.0, 2.0, 4.0] {
        for k in 0..10 {
            let nu = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 10.0);
            let mut m = identity(3);
            m[(1, 1)] = Complex64::new(mu, 0.0);
            m[(2, 2)] = nu;
            ms.push((format!("diag(1,{mu},e^(2pi i {k}/10))"), m));
        }
    }
    let mut dense = 0;
    while dense < 20 {
        let m = CMatrix::from_fn(3, 3, |_, _| s.complex_in(1.0));
        if m.determinant().norm() > 0.05 {
            ms.push((format!("dense#{dense}"), m));
            dense += 1;
        }
    }
    let mut lambdas = Vec::new();
    for radius in [1.0, 2.0] {
        for k in 0..12 {
            lambdas.push(Complex64::from_polar(
                radius,
                std::f64::consts::TAU * k as f64 / 12.0,
            ));
        }
    }
    let mut out = Vec::with_capacity(ms.len() * lambdas.len());
    for (label, m) in &ms {
        for &lambda in &lambdas {
            out.push(CrossingCandidate {
                label: label.clone(),
                m: m.clone(),
                lambda,
            });
        }
    }
    out
}

pub fn crossing_candidate_residual(c: &CrossingCandidate) -> AppResult<f64> {
    let mut worst = 0.0f64;
    for z in CROSSING_PROBES {
        worst = worst.max(crossing_unitarity_residual(&c.m, c.lambda, z)?);
    }
    Ok(worst)
}

fn crossing(s: &mut Sampler, grid: Grid, threshold: f64, seed: u64) -> AppResult<ResidualReport> {
    let Grid::Default = grid;
    let candidates = crossing_grid(s);
    let samples = candidates
        .iter()
        .map(|c| {
            Ok(Sample::new(
                [("M", c.label.as_str().into()), ("lambda", c.lambda.into())],
                crossing_candidate_residual(c)?,
            ))
        })
        .collect::<AppResult<Vec<_>>>()?;
    let report =
        ResidualReport::report_only(Target::Crossing.identity_name(), samples, threshold, seed);
    let verdict = if report.min_residual > threshold {
        format!(
            "no candidate passes: minimum residual {:.6e} exceeds {threshold:e}",
            report.min_residual
        )
    } else {
        format!(
            "a candidate falls below {threshold:e} (minimum residual {:.6e})",
            report.min_residual
        )
    };
    Ok(report
        .with_note(verdict)
        .with_note("sampled search only; this is not a proof of non-existence"))
}

fn parse_params(opts: &VerifyOptions) -> AppResult<Option<ParamJson>> {
    opts.params.as_deref().map(ParamJson::parse).transpose()
}

fn diagonal_control() -> CMatrix {
    let mut d = CMatrix::zeros(3, 3);
    for i in 0..3 {
        d[(i, i)] = Complex64::new(i as f64 + 1.0, 0.0);
    }
    d
}

fn control_alpha(p: &ParamJson) -> AppResult<CubeRoot> {
    Ok(CubeRoot::from_power(p.alpha.unwrap_or(0))?)
}

/// The single-nonzero-diagonal template with `A(∞) = B(∞) = 1`,
/// `C(∞) = 0` and `D`, `E` proportional to `B`.
fn one_diagonal_minus(alpha: CubeRoot, z: Complex64) -> CMatrix {
    let one = Complex64::new(1.0, 0.0);
    let b = (z + 1.0) / (z + 2.0);
    OneDiagonalForm { alpha }.matrix(one, b, z.inv(), b.scale(0.5), b.scale(-0.3))
}

/// The single-nonzero-diagonal template with `A(0) = B(0) = 1` and
/// `C = D = E = 0`; singular at every `z`.
fn one_diagonal_plus(alpha: CubeRoot, z: Complex64) -> CMatrix {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    OneDiagonalForm { alpha }.matrix(one + z, one - z, zero, zero, zero)
}

fn k_minus_inputs(p: &KMinusParams) -> [(&'static str, InputValue); 3] {
    [
        ("a", p.a.into()),
        ("alpha", (p.alpha.power() as f64).into()),
        ("w", root_label(p.w).into()),
    ]
}

fn root_label(w: PrimitiveRoot) -> &'static str {
    match w {
        PrimitiveRoot::Primary => "primary",
        PrimitiveRoot::Conjugate => "conjugate",
    }
}

fn re_minus(
    s: &mut Sampler,
    n: usize,
    tol: f64,
    opts: &VerifyOptions,
) -> AppResult<ResidualReport> {
    let params = parse_params(opts)?;
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        let sample = match &params {
            None => {
                let (p, x, y) = loop {
                    let p = s.k_minus_params();
                    let (x, y) = s.spectral_pair();
                    if k_minus_well_conditioned(&p, &[x, y]) {
                        break (p, x, y);
                    }
                };
                let r = re_minus_residual_with(|z| k_minus(z, &p), x, y)?;
                let [a, al, w] = k_minus_inputs(&p);
                Sample::new([("x", x.into()), ("y", y.into()), a, al, w], r)
            }
            Some(pj) => {
                let (x, y) = s.spectral_pair();
                let r = match pj.kind {
                    ParamKind::Minus => {
                        let p = pj.minus_params()?;
                        re_minus_residual_with(|z| k_minus(z, &p), x, y)?
                    }
                    ParamKind::Identity => re_minus_residual_with(|_| Ok(identity(3)), x, y)?,
                    ParamKind::ScalarControl => {
                        re_minus_residual_with(|_| Ok(identity(3).scale(2.0)), x, y)?
                    }
                    ParamKind::DiagonalControl => {
                        re_minus_residual_with(|_| Ok(diagonal_control()), x, y)?
                    }
                    ParamKind::OneDiagonalControl => {
                        let alpha = control_alpha(pj)?;
                        re_minus_residual_with(|z| Ok(one_diagonal_minus(alpha, z)), x, y)?
                    }
                    ParamKind::Plus => return invalid("re-minus takes K- parameters, not K+"),
                };
                Sample::new([("x", x.into()), ("y", y.into())], r)
            }
        };
        samples.push(sample);
    }
    Ok(judged(Target::ReMinus, samples, tol, opts.seed))
}

fn re_plus(s: &mut Sampler, n: usize, tol: f64, opts: &VerifyOptions) -> AppResult<ResidualReport> {
    let params = parse_params(opts)?;
    let mut samples = Vec::with_capacity(n);
    let mut note = None;
    for _ in 0..n {
        let sample = match &params {
            None => {
                let p = s.k_plus_params();
                let (x, y) = s.spectral_pair();
                let r = re_plus_residual_with(|z| Ok(k_plus(z, &p)), x, y)?;
                Sample::new(
                    [
                        ("x", x.into()),
                        ("y", y.into()),
                        ("b", p.b().into()),
                        ("beta", (p.beta().power() as f64).into()),
                        ("j", (p.j() as f64).into()),
                        ("w", root_label(p.w()).into()),
                    ],
                    r,
                )
            }
            Some(pj) => {
                let (x, y) = s.spectral_pair();
                let r = match pj.kind {
                    ParamKind::Plus => {
                        let p = pj.plus_params()?;
                        re_plus_residual_with(|z| Ok(k_plus(z, &p)), x, y)?
                    }
                    ParamKind::Identity => re_plus_residual_with(|_| Ok(identity(3)), x, y)?,
                    ParamKind::ScalarControl => {
                        re_plus_residual_with(|_| Ok(identity(3).scale(2.0)), x, y)?
                    }
                    ParamKind::DiagonalControl => {
                        re_plus_residual_with(|_| Ok(diagonal_control()), x, y)?
                    }
                    ParamKind::OneDiagonalControl => {
                        let alpha = control_alpha(pj)?;
                        let k = |z| Ok(one_diagonal_plus(alpha, z));
                        let r = re_plus_residual_with(k, x, y)?;
                        // A non-invertible K is not a reflection matrix even
                        // where the equation balances.
                        let det = one_diagonal_plus(alpha, x).determinant().norm();
                        if det < 1e-12 {
                            note = Some("one-diagonal control is not invertible; residual reported as infinite");
                            f64::INFINITY
                        } else {
                            r
                        }
                    }
                    ParamKind::Minus => return invalid("re-plus takes K+ parameters, not K-"),
                };
                Sample::new([("x", x.into()), ("y", y.into())], r)
            }
        };
        samples.push(sample);
    }
    let report = judged(Target::RePlus, samples, tol, opts.seed);
    Ok(match note {
        Some(n) => report.with_note(n),
        None => report,
    })
}

/// Residual of the special equation; the componentwise index-law residual is
/// recorded alongside as an input.
fn special(s: &mut Sampler, n: usize, tol: f64, opts: &VerifyOptions) -> AppResult<ResidualReport> {
    let params = parse_params(opts)?;
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let use_minus = match &params {
            None => i % 2 == 0,
            Some(p) => matches!(p.kind, ParamKind::Minus),
        };
        let (ky, k0, family, y) = match &params {
            Some(p) if !matches!(p.kind, ParamKind::Minus | ParamKind::Plus) => {
                let y = s.spectral();
                let k = match p.kind {
                    ParamKind::Identity => identity(3),
                    ParamKind::ScalarControl => identity(3).scale(2.0),
                    ParamKind::DiagonalControl => diagonal_control(),
                    _ => one_diagonal_minus(control_alpha(p)?, y),
                };
                let k0 = match p.kind {
                    ParamKind::OneDiagonalControl => {
                        let zero = Complex64::new(0.0, 0.0);
                        let one = Complex64::new(1.0, 0.0);
                        OneDiagonalForm {
                            alpha: control_alpha(p)?,
                        }
                        .matrix(one, one, zero, zero, zero)
                    }
                    _ => k.clone(),
                };
                (k, k0, "control", y)
            }
            _ if use_minus => {
                let p = match &params {
                    Some(pj) => pj.minus_params()?,
                    None => s.k_minus_params(),
                };
                let y = loop {
                    let y = s.spectral();
                    if k_minus_well_conditioned(&p, &[y]) {
                        break y;
                    }
                };
                (
                    k_minus(y, &p)?,
                    k_minus_at_infinity(&p),
                    "K- (z0 = infinity)",
                    y,
                )
            }
            _ => {
                let p: KPlusParams = match &params {
                    Some(pj) => pj.plus_params()?,
                    None => s.k_plus_params(),
                };
                let y = s.spectral();
                let zero = Complex64::new(0.0, 0.0);
                (k_plus(y, &p), k_plus(zero, &p), "K+ (z0 = 0)", y)
            }
        };
        let r = special_re_residual(&ky, &k0)?;
        let index = index_law_residual(&ky, &k0)?;
        samples.push(Sample::new(
            [
                ("y", y.into()),
                ("family", family.into()),
                ("index_law", index.into()),
            ],
            r,
        ));
    }
    Ok(judged(Target::Special, samples, tol, opts.seed))
}

/// Generic boundaries used when no chain spec is supplied.
pub fn default_chain(sites: usize, n_max: usize) -> AppResult<ChainSpec> {
    let left = KMinusParams::new(
        Complex64::new(0.3, 0.5),
        CubeRoot::W,
        PrimitiveRoot::Primary,
    );
    let right = KPlusParams::new(
        Complex64::new(-0.6, 0.2),
        CubeRoot::W2,
        2,
        PrimitiveRoot::Primary,
    )?;
    use bqism_core::reflection::BoundaryChoice::{Minus, Plus};
    Ok(ChainSpec::new(
        sites,
        Minus(left),
        Plus(right),
        Complex64::new(0.0, 1.0),
        n_max,
    )?)
}

fn chain_from(opts: &VerifyOptions, default_sites: usize) -> AppResult<ChainSpec> {
    match &opts.params {
        Some(text) => ChainSpecJson::parse(text)?.resolve(opts.n_max),
        None => default_chain(default_sites, opts.n_max),
    }
}

fn transfer_commute(
    s: &mut Sampler,
    n: usize,
    tol: f64,
    opts: &VerifyOptions,
) -> AppResult<ResidualReport> {
    let spec = chain_from(opts, 2)?;
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        let (x, y) = s.spectral_pair();
        let r = relative_commutator(&transfer_matrix(x, &spec)?, &transfer_matrix(y, &spec)?)?;
        samples.push(Sample::new([("x", x.into()), ("y", y.into())], r));
    }
    Ok(judged(Target::TransferCommute, samples, tol, opts.seed)
        .with_note(format!("N = {}", spec.sites())))
}

fn ham_commute(
    s: &mut Sampler,
    n: usize,
    tol: f64,
    opts: &VerifyOptions,
) -> AppResult<ResidualReport> {
    let spec = chain_from(opts, 3)?;
    let h = global_hamiltonian(&spec)?;
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        let z = s.spectral();
        let r = relative_commutator(&h, &transfer_matrix(z, &spec)?)?;
        samples.push(Sample::new([("z", z.into())], r));
    }
    Ok(judged(Target::HamCommute, samples, tol, opts.seed)
        .with_note(format!("N = {}", spec.sites())))
}
