use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("period string must be non-empty")]
    InvalidPeriod,
    #[error("malformed edit information: {0}")]
    MalformedEditInfo(String),
    #[error("alignments cannot be composed: {0}")]
    CompositionMismatch(String),
    #[error("protocol misuse: {0}")]
    ProtocolMisuse(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("unsupported sketch format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt sketch: {0}")]
    CorruptSketch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn corrupt(msg: impl Into<String>) -> Self {
        Error::CorruptSketch(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }

    /// Whether a decoder should treat this as damaged input rather than a caller error.
    pub fn is_corrupt(&self) -> bool {
        matches!(
            self,
            Error::CorruptSketch(_) | Error::UnsupportedFormat(_) | Error::MalformedEditInfo(_)
        )
    }
}
