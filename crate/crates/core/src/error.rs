use thiserror::Error;

/// Errors produced by the sampling, estimation and experiment layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("hurst index must lie strictly inside (0, 1), got {0}")]
    InvalidHurst(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "circulant embedding is not positive semidefinite: eigenvalue {min_eigenvalue:e} \
         is below -{tolerance:e}"
    )]
    EmbeddingNotPsd { min_eigenvalue: f64, tolerance: f64 },

    #[error("covariance factorization failed: {0}")]
    FactorizationFailed(String),

    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),

    #[error("nonpositive estimate {point:e} at design point x = {x}; increase the sample size")]
    NonpositiveEstimate { x: f64, point: f64 },

    #[error("horizon misaligned with grid: {0}")]
    HorizonMisaligned(String),

    #[error("boundary is not strictly positive at t = 0; the survival event is degenerate")]
    BoundaryViolatedAtZero,

    #[error("epsilon {epsilon} is below the resolution floor {floor} (8 grid steps)")]
    EpsilonBelowResolution { epsilon: f64, floor: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
