use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: expected max mode {expected}, got {got}")]
    GridMismatch { expected: usize, got: usize },

    #[error("undersampled grid: {m} physical points cannot represent modes up to {n_max} ({requirement})")]
    Undersampled {
        m: usize,
        n_max: usize,
        requirement: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time grid must be strictly increasing")]
    NonMonotoneGrid,

    #[error("solution blew up at t = {time:.6e} (mode {mode}, |c| = {magnitude:.3e})")]
    Blowup {
        time: f64,
        mode: usize,
        magnitude: f64,
    },

    #[error("fixed-point iteration did not converge within {max_iterations} iterations (last residual {residual:.3e})")]
    NoConvergence {
        max_iterations: usize,
        residual: f64,
    },

    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
