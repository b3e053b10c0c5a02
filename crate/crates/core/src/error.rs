use thiserror::Error;

/// Errors raised by the model, the pattern predicates and the I/O layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid probability {name} = {value}: must lie in [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("invalid precision {name} = {value}: must lie strictly between 1/2 and 1")]
    InvalidPrecision { name: &'static str, value: f64 },

    #[error("invalid payoffs: u_correct - u_wrong = {delta} must be positive and finite")]
    InvalidPayoffs { delta: f64 },

    #[error("invalid processing cost {0}: must be finite and non-negative")]
    InvalidCost(f64),

    #[error("priors must be ordered: p_i = {p_i} is not below p_j = {p_j}")]
    Ordering { p_i: f64, p_j: f64 },

    #[error("prior {p} lies outside the non-extreme set for the observed first component")]
    OutsideNonExtreme { p: f64 },

    #[error("prior p = 1/2 favors neither state")]
    IndifferentPrior,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("scenario must carry one or two priors, got {0}")]
    PriorCount(usize),

    #[error("draws must be positive")]
    NoDraws,
}

pub type Result<T> = std::result::Result<T, ModelError>;
