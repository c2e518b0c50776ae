use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Failure modes of the numerical routines.
#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative scheme stopped before meeting its tolerance.
    #[error("{context}: no convergence (estimate {estimate:e}, error {error:e})")]
    NonConvergence { context: String, estimate: f64, error: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn non_convergence(context: impl Into<String>, estimate: f64, error: f64) -> Self {
        Error::NonConvergence {
            context: context.into(),
            estimate,
            error,
        }
    }

    /// Prefixes the context of a non-convergence error; domain errors pass through.
    pub fn within(self, outer: &str) -> Self {
        match self {
            Error::NonConvergence {
                context,
                estimate,
                error,
            } => Error::NonConvergence {
                context: format!("{outer}: {context}"),
                estimate,
                error,
            },
            other => other,
        }
    }

    /// Process exit code used by the command-line tool: 2 for domain errors,
    /// 3 for non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            Error::NonConvergence { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
