use thiserror::Error;

/// Errors shared across the crate. Mathematical *verdicts* (a failed cocycle
/// check, a non-isomorphism) are reported through result structs, not through
/// this type; `CoreError` is for structural misuse and resource exhaustion.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("comparison data violates the cocycle condition on ({0}, {1}, {2})")]
    CocycleInvalid(String, String, String),
    #[error("presentation did not stabilize within depth {depth}: {detail}")]
    NoStabilization { depth: u32, detail: String },
    #[error("invalid chain: {0}")]
    ChainError(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
