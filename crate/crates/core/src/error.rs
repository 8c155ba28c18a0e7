use std::fmt;

/// Errors produced by every layer of the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot parse ring spec at `{token}`: {reason}")]
    RingSpec { token: String, reason: String },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl fmt::Display) -> Self {
        Error::InvalidInput(msg.to_string())
    }

    pub(crate) fn internal(msg: impl fmt::Display) -> Self {
        Error::Internal(msg.to_string())
    }

    pub(crate) fn hypothesis(msg: impl fmt::Display) -> Self {
        Error::Hypothesis(msg.to_string())
    }
}
