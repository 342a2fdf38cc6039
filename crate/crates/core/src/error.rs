use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("singular evaluation: {0}")]
    Singular(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("quadrature did not meet its self-estimate: {0}")]
    Quadrature(String),
    #[error("wrap contamination {contamination:.3e} exceeds tolerance {tolerance:.3e}; use a larger box")]
    Wrap { contamination: f64, tolerance: f64 },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("root not bracketed: {0}")]
    Bracket(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
