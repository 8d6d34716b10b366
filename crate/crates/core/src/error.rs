use thiserror::Error;

/// Errors raised by assembly, geometry validation and the study drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("fundamental solution is singular at the origin")]
    Singular,

    #[error("unsupported space dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("density has {got} values but the grid has {expected} nodes")]
    GridMismatch { expected: usize, got: usize },

    #[error("curves are not disjoint (minimum node distance {0:.3e})")]
    Intersecting(f64),

    #[error("point at distance {distance:.3e} is closer than the accuracy limit {required:.3e}")]
    TooClose { distance: f64, required: f64 },

    #[error("invalid diffeomorphism: {0}")]
    InvalidDiffeo(String),

    #[error(
        "epsilon {eps} is not admissible (need 0 < |eps| < {bound:.6}, the bound epsilon_max)"
    )]
    EpsilonOutOfRange { eps: f64, bound: f64 },

    #[error("series order {order} exceeds the cached maximum {max}")]
    OrderTooHigh { order: usize, max: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
