//! Error taxonomy shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure categories surfaced by every fallible operation.
///
/// The CLI maps any of these to exit code 1 together with a machine-readable
/// JSON payload; usage errors from argument parsing exit with code 2.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (bad dimensions, indices, formats).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Numerically degenerate input, e.g. a rank-deficient matrix.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A dense-size or iteration cap would be exceeded.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Operation not defined in the requested mode, e.g. a weight-changing
    /// gate applied to a fixed-weight sector state.
    #[error("invalid operation: {0}")]
    InvalidOperation(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON input.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable category name.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::DegenerateInput(_) => "degenerate-input",
            Error::ResourceLimit(_) => "resource-limit",
            Error::InvalidOperation(_) => "invalid-operation",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
