use thiserror::Error;

/// Errors shared by all modules of this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An exhaustive enumeration would exceed its size guard. The guards
    /// exist so that oversized instances fail loudly instead of hanging.
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    /// The requested method is not available for this alphabet size.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn guard(msg: impl Into<String>) -> Self {
        Error::GuardExceeded(msg.into())
    }
}
