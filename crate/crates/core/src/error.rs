use thiserror::Error;

use crate::feasibility::ConeCertificate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degree {requested} exceeds the maximal degree {max} of this system")]
    DegreeExceeded { requested: usize, max: usize },

    #[error("recurrence coefficient a_{index} = {value:e} is not positive (degenerate measure)")]
    NonPositiveRecurrence { index: usize, value: f64 },

    #[error("p_{k}(s) vanishes at s = {s} (|p_k(s)| = {value:e}); rank-one corner is singular")]
    SingularRho { k: usize, s: f64, value: f64 },

    #[error("normalization undefined: (1 - s) * K(1, s)^2 = {0:e}")]
    Unnormalizable(f64),

    #[error("polynomial is not in the cone: {}", .0.reason())]
    NotInCone(Box<ConeCertificate>),

    #[error("no Levenshtein window of admissible degree contains s = {s} (largest usable endpoint {limit})")]
    DegreeBudgetExceeded { s: f64, limit: f64 },

    #[error("no certified bound: {0}")]
    NoCertifiedBound(String),

    #[error("degenerate denominator: 1 - lambda = {0:e}")]
    DegenerateDenominator(f64),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("simplex iteration cap of {0} pivots exceeded")]
    IterationCap(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("enumeration budget exceeded: {0} items requested")]
    BudgetExceeded(u128),

    #[error("numeric overflow: {0}")]
    Overflow(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::DegreeExceeded { .. }
            | Error::DimensionMismatch(..)
            | Error::BudgetExceeded(_) => 2,
            Error::NotInCone(_)
            | Error::DegreeBudgetExceeded { .. }
            | Error::NoCertifiedBound(_)
            | Error::Unnormalizable(_)
            | Error::SingularRho { .. }
            | Error::DegenerateDenominator(_) => 3,
            Error::NonPositiveRecurrence { .. }
            | Error::Eigen(_)
            | Error::IterationCap(_)
            | Error::Overflow(_) => 4,
        }
    }
}
