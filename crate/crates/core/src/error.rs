use thiserror::Error;

/// Failure modes shared by every stage of the construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller asked for something outside an operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A computed object failed one of the checks it is required to pass.
    #[error("verification failed: {0}")]
    Verification(String),
    /// An enumeration would exceed its configured budget.
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    /// An arithmetic identity that must hold did not; indicates a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),
    /// A serialized certificate could not be read.
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) | Error::Internal(_) => 1,
            Error::InvalidInput(_) | Error::Malformed(_) => 2,
            Error::Resource(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::$variant(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
