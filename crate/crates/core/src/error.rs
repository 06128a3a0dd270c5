use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid domain {family}: {constraint} required")]
    InvalidDomain {
        family: String,
        constraint: &'static str,
    },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid Hartogs specification: {0}")]
    InvalidSpec(String),

    #[error("alpha = {alpha} must exceed the threshold {threshold}")]
    BelowThreshold { alpha: f64, threshold: f64 },

    #[error("{0} has no closed-form generic norm")]
    UnsupportedFamily(String),

    #[error("coordinate block has the wrong shape for {family}: {detail}")]
    Shape { family: String, detail: String },

    #[error("point lies outside the domain: {0}")]
    Outside(String),

    #[error("point is within {distance} of the boundary; finite differences need {required}")]
    BoundaryProximity { distance: f64, required: f64 },

    #[error("rejection sampling failed after {attempts} attempts for {what}")]
    SamplingFailed { attempts: usize, what: String },

    #[error("operation requires k = {expected} factors, got {got}")]
    FactorCount { expected: usize, got: usize },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("unknown verification suite `{0}` (known: difference-identities, catalog-bounds, kernel-vs-hessian, epsilon-constancy)")]
    UnknownSuite(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
