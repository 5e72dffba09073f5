use thiserror::Error;

/// Errors raised by the library. Usage errors carry enough context to fix the call.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("variable index {var} out of range for arity {arity}")]
    VarOutOfRange { var: usize, arity: usize },
    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NonSquare { rows: usize, row: usize, len: usize },
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("invalid pose: q0 = q1 = 0")]
    InvalidPose,
    #[error("invalid design: {0}")]
    InvalidDesign(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("pose is not a solution of the constraint system")]
    NotASolution,
    #[error("the two realisations have different intrinsic metrics: {0}")]
    MetricMismatch(String),
    #[error("the two realisations are congruent")]
    Congruent,
    #[error("invalid family spec: {0}")]
    InvalidFamily(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("theorem verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
