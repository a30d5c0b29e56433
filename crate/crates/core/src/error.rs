use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid probability vector: {0}")]
    InvalidProbVec(String),

    #[error("invalid stochastic map: {0}")]
    InvalidMap(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("dimension {0} too large for exhaustive permutation enumeration (max 8)")]
    TooLarge(usize),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("spin {0} is not a non-negative half-integer <= 25/2")]
    InvalidSpin(f64),

    #[error("invalid spin direction: {0}")]
    InvalidDirection(String),

    #[error("eigendecomposition failed: {0}")]
    Decomposition(String),

    #[error("informationally incomplete design: rank {rank} < {needed}")]
    InformationallyIncomplete { rank: usize, needed: usize },

    #[error("invalid wavefunction: {0}")]
    InvalidWaveFunction(String),

    #[error("grid too narrow: {0}")]
    GridTooNarrow(String),

    #[error("degenerate symplectic ray: mu = nu = 0")]
    DegenerateRay,

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("moment-generating function diverges at t = {t}, theta = {theta}")]
    MgfDivergence { t: f64, theta: f64 },

    #[error("numerical consistency failure: {0}")]
    NumericalConsistency(String),

    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
