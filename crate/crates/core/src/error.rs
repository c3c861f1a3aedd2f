use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input outside the domain of an operation (bad level, weight outside
    /// the alcove, singular matrix, unknown module name, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Module data that parses but violates a structural invariant.
    #[error("invalid module data: {0}")]
    Validation(String),

    /// Malformed module file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A computed quantity disagrees with a property that must hold.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// Valid input that this implementation does not handle.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A consistency guard that should never fire.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
