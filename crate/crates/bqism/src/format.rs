//! JSON encodings for matrices, boundary parameters and chain specs.
//! Complex numbers are `[re, im]` pairs throughout.

use bqism_core::chain::{hermitian_a, hermitian_b, ChainSpec};
use bqism_core::reflection::{BoundaryChoice, CubeRoot, KMinusParams, KPlusParams, PrimitiveRoot};
use bqism_core::tensor::{from_row_major, to_row_major};
use bqism_core::{CMatrix, Complex64};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, AppError, AppResult};

pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn complex(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// `{"dim": n, "entries": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Pair>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            dim: m.nrows(),
            entries: to_row_major(m).into_iter().map(pair).collect(),
        }
    }

    pub fn to_matrix(&self) -> AppResult<CMatrix> {
        let entries: Vec<Complex64> = self.entries.iter().copied().map(complex).collect();
        Ok(from_row_major(self.dim, &entries)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamKind {
    Minus,
    Plus,
    Identity,
    /// `diag(1, 2, 3)` at every `z`; must fail both reflection equations.
    DiagonalControl,
    /// `2I`; solves both reflection equations trivially.
    ScalarControl,
    /// Single-nonzero-diagonal template that cannot solve either equation.
    OneDiagonalControl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootName {
    #[default]
    Primary,
    Conjugate,
}

impl From<RootName> for PrimitiveRoot {
    fn from(r: RootName) -> Self {
        match r {
            RootName::Primary => PrimitiveRoot::Primary,
            RootName::Conjugate => PrimitiveRoot::Conjugate,
        }
    }
}

impl From<PrimitiveRoot> for RootName {
    fn from(r: PrimitiveRoot) -> Self {
        match r {
            PrimitiveRoot::Primary => RootName::Primary,
            PrimitiveRoot::Conjugate => RootName::Conjugate,
        }
    }
}

/// Boundary parameters. Omitted `alpha`, `beta` default to 0, `j` to 1 and
/// `w` to the primary root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamJson {
    pub kind: ParamKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<RootName>,
}

impl ParamJson {
    pub fn parse(text: &str) -> AppResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn identity() -> Self {
        Self {
            kind: ParamKind::Identity,
            a: None,
            b: None,
            alpha: None,
            beta: None,
            j: None,
            w: None,
        }
    }

    pub fn from_minus(p: &KMinusParams) -> Self {
        Self {
            kind: ParamKind::Minus,
            a: Some(pair(p.a)),
            alpha: Some(p.alpha.power()),
            w: Some(p.w.into()),
            ..Self::identity()
        }
    }

    pub fn from_plus(p: &KPlusParams) -> Self {
        Self {
            kind: ParamKind::Plus,
            b: Some(pair(p.b())),
            beta: Some(p.beta().power()),
            j: Some(p.j()),
            w: Some(p.w().into()),
            ..Self::identity()
        }
    }

    fn root(&self) -> PrimitiveRoot {
        self.w.unwrap_or_default().into()
    }

    fn j_or_default(&self) -> u8 {
        self.j.unwrap_or(1)
    }

    fn require_kind(&self, kind: ParamKind) -> AppResult<()> {
        if self.kind != kind {
            return invalid(format!(
                "expected parameters of kind {kind:?}, found {:?}",
                self.kind
            ));
        }
        Ok(())
    }

    /// `K⁻` parameters, with `a` supplied explicitly or through `X`.
    pub fn minus_params_with(&self, x: Option<f64>) -> AppResult<KMinusParams> {
        self.require_kind(ParamKind::Minus)?;
        let w = self.root();
        let a = match (self.a, x) {
            (Some(_), Some(_)) => return invalid("give either \"a\" or \"X\", not both"),
            (Some(a), None) => complex(a),
            (None, Some(x)) => hermitian_a(x, w)?,
            (None, None) => return invalid("K- parameters need \"a\" (or a chain-level \"X\")"),
        };
        if !a.is_finite() {
            return invalid("a must be finite");
        }
        let alpha = CubeRoot::from_power(self.alpha.unwrap_or(0))?;
        Ok(KMinusParams::new(a, alpha, w))
    }

    /// `K⁺` parameters, with `b` supplied explicitly or through `Y`.
    pub fn plus_params_with(&self, y: Option<f64>) -> AppResult<KPlusParams> {
        self.require_kind(ParamKind::Plus)?;
        let w = self.root();
        let j = self.j_or_default();
        if j != 1 && j != 2 {
            return invalid("j must be 1 or 2");
        }
        let b = match (self.b, y) {
            (Some(_), Some(_)) => return invalid("give either \"b\" or \"Y\", not both"),
            (Some(b), None) => complex(b),
            (None, Some(y)) => hermitian_b(y, j, w)?,
            (None, None) => return invalid("K+ parameters need \"b\" (or a chain-level \"Y\")"),
        };
        let beta = CubeRoot::from_power(self.beta.unwrap_or(0))?;
        Ok(KPlusParams::new(b, beta, j, w)?)
    }

    pub fn minus_params(&self) -> AppResult<KMinusParams> {
        self.minus_params_with(None)
    }

    pub fn plus_params(&self) -> AppResult<KPlusParams> {
        self.plus_params_with(None)
    }
}

/// `{"N": 3, "left": {...}, "right": {...}, "c": [0, 1], "X": 1.0, "Y": 1.0}`.
/// `X` fixes `a` on the left and `Y` fixes `b` on the right through the
/// hermitian parameterization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpecJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub left: ParamJson,
    pub right: ParamJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Pair>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

impl ChainSpecJson {
    pub fn parse(text: &str) -> AppResult<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn left_choice(&self) -> AppResult<BoundaryChoice> {
        match self.left.kind {
            ParamKind::Identity if self.x.is_some() => invalid("\"X\" needs a K- left boundary"),
            ParamKind::Identity => Ok(BoundaryChoice::Identity),
            ParamKind::Minus => Ok(BoundaryChoice::Minus(self.left.minus_params_with(self.x)?)),
            _ => invalid("left boundary must be of kind \"minus\" or \"identity\""),
        }
    }

    pub fn right_choice(&self) -> AppResult<BoundaryChoice> {
        match self.right.kind {
            ParamKind::Identity if self.y.is_some() => invalid("\"Y\" needs a K+ right boundary"),
            ParamKind::Identity => Ok(BoundaryChoice::Identity),
            ParamKind::Plus => Ok(BoundaryChoice::Plus(self.right.plus_params_with(self.y)?)),
            _ => invalid("right boundary must be of kind \"plus\" or \"identity\""),
        }
    }

    pub fn resolve(&self, n_max: usize) -> AppResult<ChainSpec> {
        let c = self.c.map(complex).unwrap_or(Complex64::new(0.0, 1.0));
        ChainSpec::new(self.n, self.left_choice()?, self.right_choice()?, c, n_max)
            .map_err(AppError::from)
    }
}
