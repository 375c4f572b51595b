use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CasimirError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("permittivity diverges at zero frequency for this model; use the zero-frequency path")]
    ZeroFrequency,

    #[error("the perfect reflector has no finite permittivity")]
    PerfectReflectorPermittivity,

    #[error("scaled special-function evaluation overflowed ({0})")]
    Overflow(String),

    #[error("{what} did not converge (estimated relative error {error:e})")]
    NonConvergence { what: String, error: f64 },

    #[error("round-trip block is not passive (m = {m}, det(1 - M) = {det:e})")]
    NotPassive { m: usize, det: f64 },

    #[error("non-finite entry in round-trip block (m = {m})")]
    NonFinite { m: usize },
}

pub type Result<T> = std::result::Result<T, CasimirError>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(CasimirError::InvalidParameter(msg()))
    }
}
