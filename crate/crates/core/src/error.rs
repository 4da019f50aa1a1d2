use thiserror::Error;

use crate::model::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller violated an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    /// An engine cap was hit. The computation is inconclusive, never wrong.
    #[error("resource limit exhausted at word {word}: {reason}")]
    ResourceExhausted { word: Word, reason: String },
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn is_resource_exhausted(&self) -> bool {
        matches!(self, Error::ResourceExhausted { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
