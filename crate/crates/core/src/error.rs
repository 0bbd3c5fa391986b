use thiserror::Error;

/// Errors raised by the geometry, jet and envelope layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("vector is not on the {model} model: {detail}")]
    Domain { model: &'static str, detail: String },

    #[error("degenerate subspace at index {index}")]
    Degenerate { index: usize },

    #[error("curve is not of finite type within order {r_max} (rank stalled at {rank})")]
    FiniteType { r_max: usize, rank: usize },

    #[error("jet order {order} is not supported by this provider (max {max})")]
    Capability { order: usize, max: usize },

    #[error("integration failed after s = {last_good}: {reason}")]
    Integration { last_good: f64, reason: String },

    #[error("frame field left the flag chart at t = {t}")]
    ChartExit { t: f64 },

    #[error("degenerate envelope: {0}")]
    DegenerateEnvelope(String),

    #[error("invalid type vector: {0}")]
    InvalidType(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
