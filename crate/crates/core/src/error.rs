use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the function's domain (μ(0), bracket with a zero index, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition does not hold for the supplied inputs.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "memory budget exceeded: {what} needs {requested} bytes, budget is {budget} bytes; {hint}"
    )]
    Resource {
        what: &'static str,
        requested: u64,
        budget: u64,
        hint: &'static str,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

/// Upper bound on the bytes a single in-memory table may allocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryBudget(pub u64);

impl MemoryBudget {
    pub const DEFAULT: MemoryBudget = MemoryBudget(2 << 30);

    pub(crate) fn check(
        self,
        what: &'static str,
        entries: u64,
        bytes_per_entry: u64,
        hint: &'static str,
    ) -> Result<()> {
        let requested = entries.saturating_mul(bytes_per_entry);
        if requested > self.0 {
            return Err(Error::Resource {
                what,
                requested,
                budget: self.0,
                hint,
            });
        }
        Ok(())
    }
}

impl Default for MemoryBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}
