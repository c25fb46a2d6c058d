use thiserror::Error;

/// Errors raised by the library. Each variant corresponds to one class of
/// broken precondition so that callers (and the CLI exit codes) can tell
/// input problems apart from numerical failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("layout mismatch: {0}")]
    Layout(String),
    #[error("size limit exceeded: {0}")]
    Size(String),
    #[error("event does not belong to this space: {0}")]
    Ownership(String),
    #[error("conditioning on a zero-probability event: {0}")]
    Conditioning(String),
    #[error("weights are not normalized: {0}")]
    Normalization(String),
    #[error("rationalization failed: {0}")]
    Rationalization(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures caused by floating point breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_) | Error::Rationalization(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
