use thiserror::Error;

use crate::product::Diagnostic;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A product fails the convergence gate.
    #[error("product rejected: {0}")]
    Convergence(#[from] Diagnostic),
    /// The summand returned NaN or an infinity.
    #[error("kernel returned a non-finite value at index {index}")]
    NonFinite { index: u64 },
    /// The request would need more memory or index range than allowed.
    #[error("resource limit: {0}")]
    Resource(String),
    /// Invalid tolerance, level or budget.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("tolerance must be positive and finite, got {eps}")))
    }
}
