use thiserror::Error;

/// Failures of the front end. Every variant maps to exit code 2.
#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] bqism_core::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type AppResult<T> = Result<T, AppError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> AppResult<T> {
    Err(AppError::Invalid(msg.into()))
}
