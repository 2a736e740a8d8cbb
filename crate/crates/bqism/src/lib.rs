//! Front end for `bqism-core`: JSON formats, seeded sampling, residual
//! reports, spectra and parameter sweeps, and the `bqism` command line.

pub mod cli;
pub mod error;
pub mod format;
pub mod report;
pub mod sampling;
pub mod spectrum;
pub mod verify;

pub use error::{AppError, AppResult};

/// Environment variable overriding the chain-length cap.
pub const NMAX_ENV: &str = "BQISM_NMAX";
