use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments that must be strictly ordered were not.
    #[error("ordering violated: {0}")]
    Ordering(String),
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request exceeds a configured size cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// A truncation parameter is below the precision floor.
    #[error("precision floor not met: {0}")]
    Precision(String),
    /// An iterative solver failed; `lo`/`hi` is the last bracket it held.
    #[error("numeric failure: {message} (last bracket [{lo}, {hi}])")]
    Numeric { message: String, lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn numeric(message: impl Into<String>, lo: f64, hi: f64) -> Self {
        Error::Numeric {
            message: message.into(),
            lo,
            hi,
        }
    }

    /// True for solver failures, false for argument validation failures.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
