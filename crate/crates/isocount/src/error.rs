use thiserror::Error;

/// Errors raised by the library modules.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A level that the requested operation does not handle.
    #[error("unsupported level N={0}")]
    UnsupportedLevel(u32),
    /// An intermediate value left the range of the fixed-width arithmetic.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    /// Integer too large for the factorization routines.
    #[error("cannot factor {0}: exceeds 64 bits")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
