use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration or model description is invalid.
    #[error("config error: {0}")]
    Config(String),

    /// A checked inequality or certificate failed.
    #[error("assertion failed: {0}")]
    Assertion(String),

    /// A floating-point computation could not be completed reliably.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The simultaneous root iteration did not converge. Carries the best iterate.
    #[error("root iteration did not converge after {iterations} iterations (max correction {max_correction:e})")]
    NoConvergence {
        iterations: usize,
        max_correction: f64,
        best: Vec<Complex64>,
        residuals: Vec<f64>,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code associated with this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain(_) | Error::Json(_) | Error::Csv(_) | Error::Io(_) => 2,
            Error::Assertion(_) => 3,
            Error::Numerical(_) | Error::NoConvergence { .. } => 4,
        }
    }
}
