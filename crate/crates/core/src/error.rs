use thiserror::Error;

/// Errors raised by the numerical routines, the fitter and the data loaders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GatError {
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid probability {0}: must lie strictly inside (0, 1)")]
    InvalidProbability(f64),

    #[error("{routine} did not converge after {iterations} iterations")]
    NonConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("no observations")]
    EmptyData,

    #[error("observation {index} is not finite ({value})")]
    NonFiniteData { index: usize, value: f64 },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    #[error("bootstrap invalid: {failed} of {total} replicate fits failed")]
    BootstrapFailures { failed: usize, total: usize },
}

pub type Result<T> = std::result::Result<T, GatError>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> GatError {
    GatError::Domain {
        function,
        detail: detail.into(),
    }
}
