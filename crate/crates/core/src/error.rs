//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside an operation's domain.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// The distribution has no finite mean (`beta * p <= 1`), so the
    /// closed-form CRPS does not exist.
    #[error("infinite mean: beta * p = {beta_p} <= 1")]
    InfiniteMean { beta_p: f64 },

    /// A series failed to reach the requested tolerance within its term cap.
    #[error("{op}: series did not converge within {terms} terms (best estimate {estimate:e}, error ~{error:e})")]
    NoConvergence {
        op: &'static str,
        terms: usize,
        estimate: f64,
        error: f64,
    },

    /// Adaptive quadrature could not meet the requested tolerance. The best
    /// estimate and its error bound are attached.
    #[error("quadrature tolerance not met: estimate {estimate:e} +/- {error_bound:e}")]
    ToleranceNotMet { estimate: f64, error_bound: f64 },
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }
}
