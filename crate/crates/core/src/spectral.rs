//! Admissible spectral parameters.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default radius of the excluded disks around poles.
pub const DEFAULT_POLE_EPS: f64 = 1e-6;

/// Which family of denominators a point has to avoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleContext {
    /// `z² − z + 1` (entries of the R-matrix).
    R,
    /// Additionally `z − 1` and `z³ − 1` (prefactor of the dual R-matrix).
    CurlyR,
}

/// A complex spectral parameter that has been checked against pole proximity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    z: Complex64,
    context: PoleContext,
}

impl SpectralPoint {
    pub fn new(z: Complex64, context: PoleContext, eps: f64) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::PoleProximity { z, eps });
        }
        let one = Complex64::new(1.0, 0.0);
        let mut near = (z * z - z + one).norm() <= eps;
        if context == PoleContext::CurlyR {
            near |= (z - one).norm() <= eps || (z * z * z - one).norm() <= eps;
        }
        if near {
            return Err(Error::PoleProximity { z, eps });
        }
        Ok(Self { z, context })
    }

    pub fn for_r(z: Complex64) -> Result<Self> {
        Self::new(z, PoleContext::R, DEFAULT_POLE_EPS)
    }

    pub fn for_curly_r(z: Complex64) -> Result<Self> {
        Self::new(z, PoleContext::CurlyR, DEFAULT_POLE_EPS)
    }

    pub fn value(self) -> Complex64 {
        self.z
    }

    pub fn context(self) -> PoleContext {
        self.context
    }
}

/// Rejects zero, where the reciprocal `1/z` used by most identities is undefined.
pub(crate) fn nonzero(z: Complex64) -> Result<Complex64> {
    if z.norm() <= DEFAULT_POLE_EPS {
        Err(Error::PoleProximity {
            z,
            eps: DEFAULT_POLE_EPS,
        })
    } else {
        Ok(z)
    }
}
