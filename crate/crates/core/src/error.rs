use thiserror::Error;

/// Errors raised by laws, samplers and harnesses.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter violates its validity constraint (e.g. a variance <= 0).
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// An evaluation point lies outside the support of the law.
    #[error("domain error: {0}")]
    Domain(String),
    /// A law is singular or otherwise unusable for density evaluation.
    #[error("degenerate law: {0}")]
    Degenerate(String),
    /// An empirical estimate cannot be formed from the given sample.
    #[error("estimation error: {0}")]
    Estimation(String),
    /// Inconsistent harness configuration (e.g. scenario/params mismatch).
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Parameter(what()))
    }
}
