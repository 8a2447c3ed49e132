use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("integrand is negative (minimum {min:e}) where a non-negative function is required")]
    NegativeIntegrand { min: f64 },

    #[error("denominator is not strictly positive (minimum {min:e})")]
    ZeroDenominator { min: f64 },

    #[error("no positive periodic solution: mean growth rate {mean:e} is not positive")]
    NoPositiveSolution { mean: f64 },

    #[error("linear system is singular (determinant {det:e})")]
    SingularSystem { det: f64 },

    #[error("step size underflow at t = {t:e} (h = {h:e})")]
    StepFailure { t: f64, h: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("iterate left the open positive quadrant: ({u:e}, {v:e})")]
    NonPositive { u: f64, v: f64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid system: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
