use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid band profile: {0}")]
    InvalidProfile(String),
    #[error("window of size {needed} exceeds the cap {cap}")]
    WindowTooLarge { needed: usize, cap: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
    #[error("error bound {best:.3e} not reached within j <= {max_j}, requested {requested:.3e}")]
    BoundNotReached { best: f64, requested: f64, max_j: u64 },
    #[error("guard of {guard} iterations exceeded: {what}")]
    GuardExceeded { guard: usize, what: String },
    #[error("eigensolver failed to converge after {0} steps")]
    NoConvergence(usize),
    #[error("unknown operator id `{id}`: {reason}")]
    UnknownOperator { id: String, reason: String },
    #[error("configuration errors:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("epsilon {eps:e} lies below the floor {floor:e}")]
    EpsilonFloor { eps: f64, floor: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
