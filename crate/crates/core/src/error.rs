use thiserror::Error;

/// Errors raised by the library. The variants line up with the CLI exit codes:
/// argument errors exit 1, verification failures exit 2, everything that
/// concerns data, resources or capability limits exits 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("unsupported: {0}")]
    Capability(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("incomplete result: {reason}")]
    Incomplete {
        reason: String,
        /// Partial output serialized as JSON so the caller can still report it.
        partial: Option<String>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
