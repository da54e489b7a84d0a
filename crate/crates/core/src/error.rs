use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The bounds only cover `0 < α ≤ 0.1`.
    #[error("alpha out of range (0, 0.1]: {0}")]
    AlphaOutOfRange(f64),

    #[error("z = {z} outside the convergence region 0 < z·sqrt(p1) < 1 (p1 = {p1})")]
    OutsideConvergence { z: f64, p1: f64 },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("sequence too short: need index {needed}, have up to {available}")]
    InsufficientLength { needed: usize, available: usize },

    #[error(
        "series tail bound {tail_bound:e} at z = {z} exceeds {tolerance:e}; supply more terms"
    )]
    SeriesTooShort {
        z: f64,
        tail_bound: f64,
        tolerance: f64,
    },

    #[error("no sign change of C(z) on [{low}, {high}]: C(low) = {c_low:e}, C(high) = {c_high:e}")]
    NoSignChange {
        low: f64,
        high: f64,
        c_low: f64,
        c_high: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

impl Error {
    /// Capacity errors are resource limits rather than bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_))
    }
}
