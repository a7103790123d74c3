use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid arguments or violated preconditions.
    #[error("usage error: {0}")]
    Usage(String),

    /// The family `GG_{n1,n2}` has no infinite member, so there is no critical radius.
    #[error("GG_{{{n1},{n2}}} is finite for every radius (lcm in {{2, 3, 4, 6}})")]
    AlwaysFinite { n1: u32, n2: u32 },

    #[error("bad bracket [{lo}, {hi}]: expected (Finite, InfinitePresumed), got ({lo_verdict}, {hi_verdict})")]
    BadBracket {
        lo: f64,
        hi: f64,
        lo_verdict: String,
        hi_verdict: String,
    },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// A geometric construction could not be carried out (usually a point left a disk).
    #[error("construction failed: {0}")]
    Construction(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    /// Indicates a bug: an arithmetic identity that must hold did not.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("sink failed: {0}")]
    Sink(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
