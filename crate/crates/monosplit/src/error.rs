//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Non-finite or dimensionally inconsistent input data.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A parameter violates its documented range (e.g. a step size <= 0).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Random sampling could not produce usable data.
    #[error("sampling error: {0}")]
    Sampling(String),

    /// The requested computation is not supported for this configuration.
    #[error("capability error: {0}")]
    Capability(String),

    /// The object is not in a state that allows the operation.
    #[error("state error: {0}")]
    State(String),

    /// An iterate left the finite range. `last_finite` holds the last
    /// iterate that was still representable.
    #[error("iterate diverged at n = {at}")]
    Divergence { at: usize, last_finite: Vec<f64> },

    /// Malformed text input (CSV, config), with a 1-based line number.
    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },

    /// Inconsistent experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    /// A validation suite or load-time consistency check failed.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("i/o error on {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
