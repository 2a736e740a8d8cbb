use num_complex::Complex64;

/// Failure modes shared by every construction in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("spectral parameter {z} is within {eps:e} of a pole")]
    PoleProximity { z: Complex64, eps: f64 },

    #[error("{what} is singular")]
    Singular { what: &'static str },

    #[error("site {site} out of range for a chain of {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("product is not a scalar multiple of the identity (relative deviation {deviation:e})")]
    NotScalar { deviation: f64 },

    #[error("trace of K+(1) vanishes (b = w^j - 1)")]
    VanishingTrace,

    #[error("boundary coupling 1 - w^2 + a vanishes")]
    SingularCoupling,

    #[error("coupling {name} must be nonzero")]
    ZeroCoupling { name: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("chain of {sites} sites exceeds the cap of {cap}")]
    DimensionCap { sites: usize, cap: usize },

    #[error("matrix is identically zero")]
    ZeroMatrix,
}

pub type Result<T> = core::result::Result<T, Error>;
