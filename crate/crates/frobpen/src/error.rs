//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by the exact computer-algebra kernel.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CasError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix: determinant is the zero rational function")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cannot parse rational scalar from {0:?}")]
    ParseScalar(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("exact division failed: divisor does not divide dividend")]
    InexactDivision,
}

/// Errors raised while building or validating pencil specifications.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("{0}")]
    Cas(#[from] CasError),
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error(
        "vertex labels violate the order convention (an ancestor has a larger label); \
         suggested relabeling old->new: {suggestion:?}"
    )]
    BadLabeling { suggestion: Vec<(usize, usize)> },
    #[error("unsupported: complex block (mark {0:?} is not a real rational)")]
    ComplexBlock(String),
    #[error("block dimension {0} exceeds the configured cap {1}")]
    DimensionCap(usize, usize),
    #[error("spec parse error: {0}")]
    Parse(String),
    #[error("degenerate metric: {0}")]
    Degenerate(String),
    #[error("pencil spec violates conditions (i)-(iii): {0}")]
    ConditionsViolated(String),
    #[error("non-invertible Jacobian")]
    SingularJacobian,
    #[error("{0}")]
    Unsupported(String),
}
