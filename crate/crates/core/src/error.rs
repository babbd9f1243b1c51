use thiserror::Error;

use crate::monomials::Multidegree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: characteristic {0} is neither 0 nor prime")]
    InvalidField(u64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("the ideal has no generators")]
    EmptyIdeal,

    #[error("resource cap exceeded: {0}")]
    TooLarge(String),

    #[error("not a complex: {0}")]
    NotAComplex(String),

    #[error("complex is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("complex is not minimal: {0}")]
    NotMinimal(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("vector is not a cycle of the degree-{0} differential")]
    NotACycle(usize),

    #[error("basis element {0} has zero boundary")]
    DegenerateColumn(String),

    #[error("basis is not of minimal support at {apex}: {reason}")]
    NotMinimalSupport { apex: String, reason: String },

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error(
        "degree map is not a morphism of posets: {lower} < {upper} but deg {lower_deg:?} is not below {upper_deg:?}"
    )]
    NotAMorphism {
        lower: String,
        upper: String,
        lower_deg: Multidegree,
        upper_deg: Multidegree,
    },

    #[error("relations contain a cycle through {0}")]
    CyclicOrder(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
