use thiserror::Error;

/// Errors raised by the symbolic and numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent expression is not affine-linear: {0}")]
    NonlinearExponent(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("unsupported denominator in formal action: {0}")]
    UnsupportedDenominator(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("resonant parameters: indicial symbol vanishes at m = {m}")]
    Resonance { m: usize },
    #[error("truncation insufficient; try M >= {suggested}")]
    TruncationInsufficient { suggested: usize },
    #[error("rank deficient system at degree {degree}: rank {rank} < {unknowns}")]
    RankDeficient {
        degree: usize,
        rank: usize,
        unknowns: usize,
    },
    #[error("residual {residual:e} exceeds tolerance {tolerance:e} ({context})")]
    ResidualTooLarge {
        residual: f64,
        tolerance: f64,
        context: String,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("regularity violation: {0}")]
    Regularity(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
