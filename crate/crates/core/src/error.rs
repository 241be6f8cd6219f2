use thiserror::Error;

use crate::order::Degree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("vector {0} is not positive for the order")]
    NotPositive(Degree),

    #[error("no weight certificate found within max-norm budget {budget}")]
    NoWeightCertificate { budget: i64 },

    #[error("term at {0} lies outside the declared support")]
    SupportViolation(Degree),

    #[error("series is apparently zero up to probe height {probe}, cannot invert")]
    ApparentlyZero { probe: u64 },

    #[error("leading coefficient {0} is not invertible over the integers")]
    NotInvertible(String),

    #[error("constant-term matrix is singular")]
    SingularConstantTerm,

    #[error("matrix entry ({row},{col}) has support below zero")]
    NegativeSupport { row: usize, col: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("basis mismatch: expected {expected}, got {got}")]
    BasisMismatch { expected: String, got: String },

    #[error("coefficient at {degree} is beyond truncation height {height}")]
    BeyondTruncation { degree: Degree, height: i64 },

    #[error("truncation exhausted at resolution step {step}")]
    TruncationExhausted { step: usize },

    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("invalid module: {0}")]
    Module(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("invalid complex: {0}")]
    Complex(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
