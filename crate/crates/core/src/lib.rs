//! Boundary quantum inverse scattering for the D(D₃) R-matrix, which lacks
//! crossing unitarity.
//!
//! The crate builds the explicit R-matrix and its dual, the two families of
//! reflection matrices, the commuting transfer matrices of the open chain
//! and the resulting anyon Hamiltonian, together with residual checkers for
//! every identity they are expected to satisfy.
//!
//! It is `no_std` with `alloc`; the `std` feature (on by default) only
//! forwards to the dependencies.

#![no_std]

extern crate alloc;

pub mod chain;
pub mod error;
pub mod reflection;
pub mod rmatrix;
pub mod spectral;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use tensor::CMatrix;
