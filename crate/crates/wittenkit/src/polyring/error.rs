use thiserror::Error;

/// Errors produced by the polynomial ring layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for {num_vars} variables")]
    IndexOutOfRange { index: usize, num_vars: usize },

    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    PointDimension { expected: usize, got: usize },

    #[error("weight vector must have strictly positive entries")]
    ZeroWeight,

    #[error("weight vector has {got} entries, expected {expected}")]
    WeightDimension { expected: usize, got: usize },

    #[error(
        "support point {exponent:?} lies above the hyperplane (degree {found} > face degree {face})"
    )]
    SupportAboveFace {
        exponent: Vec<u32>,
        found: u64,
        face: u64,
    },

    #[error("polynomial is not quasi-homogeneous for the given weights")]
    NotQuasiHomogeneous,

    #[error("substitution power {0} must be odd")]
    EvenSubstitutionPower(u32),

    #[error("gap lower bound {gap_low} must be below the degree {degree}")]
    InvalidGap { gap_low: u64, degree: u64 },

    #[error("operation requires a nonconstant polynomial")]
    ConstantPolynomial,

    #[error("parse error: {0}")]
    Parse(String),
}
