use std::io;

/// Errors raised by the algebra engine and the enumeration pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied argument is malformed (index out of range, wrong length, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The input structure lacks a property the operation relies on.
    #[error("unsupported structure: {0}")]
    Unsupported(String),

    /// Left powers of an element never return to the identity.
    #[error("element {element} is not power associative (left powers never reach the identity)")]
    NotPowerAssociative { element: usize },

    /// An operation precondition (variety membership, axioms) is violated.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The operation declined to run, e.g. because a coset space is too large.
    #[error("refused: {0}")]
    Refused(String),

    /// A computed object violates a property that must hold by construction.
    #[error("internal consistency violation: {0}")]
    Internal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The pipeline stopped at a checkpoint on request; the job can be resumed.
    #[error("interrupted after {0} checkpoint steps")]
    Interrupted(usize),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
