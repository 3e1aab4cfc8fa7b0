use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("right-hand side evaluated at singular radius r = {0}")]
    SingularRadius(f64),

    #[error("no bracket found: {0}")]
    NoBracketFound(String),

    #[error("profile has not converged to a multiple of pi")]
    NotConverged,

    #[error("found {found} zeros of h - k*pi, need at least {needed}")]
    TooFewZeros { found: usize, needed: usize },

    #[error("tail analysis needs g'(k*pi) {expected} 0, got {value}")]
    WrongRegime { expected: &'static str, value: f64 },

    #[error("empty profile")]
    EmptyProfile,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
