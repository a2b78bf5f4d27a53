use thiserror::Error;

use crate::dsl::DslError;
use crate::geometry::Momentum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A d-vector vanished (band touching); angles and overlaps are undefined there.
    #[error("gap closure{}: |d| = {norm:e}", at_suffix(.momentum))]
    GapClosure { norm: f64, momentum: Option<Momentum> },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("momentum {momentum} is not critical: |g| = {overlap:e} >= {tolerance:e}")]
    NotCritical {
        momentum: Momentum,
        overlap: f64,
        tolerance: f64,
    },

    #[error("non-finite rate: Loschmidt factor vanishes exactly at t = {time} for {momentum}")]
    NonFiniteRate { time: f64, momentum: Momentum },

    #[error("sublattice basis is unavailable for superconductor-class models")]
    BasisUnavailable,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(transparent)]
    Dsl(#[from] DslError),
}

fn at_suffix(m: &Option<Momentum>) -> String {
    match m {
        Some(m) => format!(" at {m}"),
        None => String::new(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
