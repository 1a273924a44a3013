use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid vortex configuration: {0}")]
    InvalidConfiguration(String),

    #[error("grid too coarse: nr = {nr}, ntheta = {ntheta} (minimum {min} each)")]
    GridTooCoarse { nr: usize, ntheta: usize, min: usize },

    /// The area bound fails; no solution of the continuum problem exists.
    #[error("Bradlow bound violated: margin A/4pi - N - M/2 = {margin}")]
    Bradlow { margin: f64 },

    #[error("shooting bracket not found on h0 in [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("ill-conditioned computation: {0}")]
    Conditioning(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
