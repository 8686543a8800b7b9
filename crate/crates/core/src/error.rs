use alloc::string::String;

use crate::bell::Term;

/// Which state constraint a (p,q) pair breaks.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum ConstraintViolation {
    #[error("q = {q} is below the minimum -1/(4*sqrt3)")]
    QBelowMinimum { q: f64 },
    #[error("q = {q} is above the maximum sqrt3/4")]
    QAboveMaximum { q: f64 },
    #[error("|p| = {abs_p} exceeds 1/8 + (sqrt3/2)q = {limit}")]
    PTooLarge { abs_p: f64, limit: f64 },
    #[error("parameters must be finite")]
    NotFinite,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("{len} entries do not form a {dim}x{dim} matrix")]
    BadShape { dim: usize, len: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(&'static str),
    #[error("invalid state parameters: {0}")]
    InvalidParams(#[from] ConstraintViolation),
    #[error("not an X state: entry ({row},{col}) has magnitude {magnitude:e}")]
    NotXState {
        row: usize,
        col: usize,
        magnitude: f64,
    },
    #[error("negative block product a{index}*b{index} = {value:e}")]
    NegativeBlock { index: usize, value: f64 },
    #[error("unknown inequality `{0}`")]
    UnknownInequality(String),
    #[error("invalid Bell expression: {0}")]
    InvalidExpression(&'static str),
    #[error("missing correlator <{0}>")]
    MissingCorrelator(Term),
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("q = {0} is outside the state range")]
    OutOfRange(f64),
}
