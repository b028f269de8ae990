use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed arguments: wrong lengths, out-of-range indices, non-finite
    /// data, unsorted spectra.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A gate matrix has the wrong shape or is not unitary to tolerance.
    #[error("invalid gate: {0}")]
    InvalidGate(String),

    /// An iterative kernel did not converge.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The requested state would exceed a configured size guard.
    #[error("capacity exceeded: {what} needs {required_bytes} bytes (limit {limit})")]
    CapacityExceeded {
        what: String,
        required_bytes: u128,
        limit: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
