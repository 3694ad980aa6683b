use std::fmt;

use crate::model::Violation;

/// Errors produced by model construction, analytic operations, simulation,
/// and scenario handling.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An operation precondition does not hold (e.g. `n_e > n_omega`).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// One or more type invariants are violated; each entry carries the
    /// field path of the offending value.
    #[error("validation failed: {}", ViolationSummary(.0))]
    Validation(Vec<Violation>),

    /// Scenario file could not be parsed. The message includes line and
    /// column information when available.
    #[error("parse error: {0}")]
    Parse(String),

    /// A command was invoked without the scenario section it needs.
    #[error("usage error: {0}")]
    Usage(String),

    /// I/O failure while reading or writing a file.
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

struct ViolationSummary<'a>(&'a [Violation]);

impl fmt::Display for ViolationSummary<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
