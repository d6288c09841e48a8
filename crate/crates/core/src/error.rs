use thiserror::Error;

use crate::group::Space;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ambient space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: Space, found: Space },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("malformed input at `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
