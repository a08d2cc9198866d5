use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation does not support this kind of system.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The input is geometrically degenerate.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A node, point or level cap was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A result contradicted a guarantee that should always hold.
    #[error("internal error: {0}")]
    Internal(String),

    /// Malformed line in an IFS description.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Well-formed line carrying an invalid value.
    #[error("line {line}: invalid value: {msg}")]
    Validation { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
