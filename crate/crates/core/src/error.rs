use thiserror::Error;

/// Errors raised by the library.
///
/// `Invalid` covers every rejected input; `Internal` means an arithmetic
/// identity that must hold did not, which is a bug rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("GRH-conditional formula `{0}` requires an explicit GRH acknowledgement")]
    GrhNotAcknowledged(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
