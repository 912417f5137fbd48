use thiserror::Error;

/// Errors raised by the numerical kernels, the analytic formulas and the simulators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument {value} outside domain ({reason})")]
    Domain {
        func: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{func}: pole at {value}")]
    Pole { func: &'static str, value: f64 },

    #[error("{func}: integrable singularity hit exactly at {value}")]
    Singularity { func: &'static str, value: f64 },

    #[error("{func}: series did not converge within {terms} terms")]
    NonConvergence { func: &'static str, terms: usize },

    #[error("{func}: estimated relative rounding error {rel_error:e} exceeds the accepted bound")]
    IllConditioned { func: &'static str, rel_error: f64 },

    #[error("quadrature did not reach tolerance: error estimate {error:e} after {subdivisions} subdivisions")]
    Quadrature { error: f64, subdivisions: usize },

    #[error("gamma = {gamma} lies in the unsupported region ({lower}, {upper}]")]
    UnsupportedRegion { gamma: f64, lower: f64, upper: f64 },

    #[error("window radius {window} does not cover the feedback region (needs at least {required})")]
    WindowTooSmall { window: f64, required: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
