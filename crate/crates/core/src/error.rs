use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("kernel singularity: x and y coincide")]
    Singularity,

    #[error("quadrature did not converge: achieved relative error {achieved:e} (requested {requested:e})")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("Newton iteration failed to converge after {iterations} iterations (best residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        best: Option<Box<crate::radial::RadialSolution>>,
    },

    #[error("Jacobian singular to working precision (pivot {pivot:e} at row {row})")]
    SingularJacobian { row: usize, pivot: f64 },

    #[error("classification mismatch: {0}")]
    Classification(String),

    #[error("convergence threshold not reached below t_max = {t_max}")]
    ThresholdNotReached { t_max: f64 },

    #[error("counterexample construction failed at t = {t:e}: {reason}")]
    Implicit { t: f64, reason: String },

    #[error("inconsistent parameters: {0}")]
    Inconsistent(String),

    #[error("certificate clause {clause} failed at ell = {ell:e}: {detail}")]
    Certificate {
        clause: &'static str,
        ell: f64,
        detail: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
