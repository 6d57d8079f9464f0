use thiserror::Error;

use crate::polyring::PolyError;

/// Errors from the cylindrical-structure layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CylError {
    #[error(transparent)]
    Poly(#[from] PolyError),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("rotation field needs indices i < j, got ({i}, {j})")]
    BadRotationIndices { i: usize, j: usize },

    #[error("operation needs at least {needed} variables, got {got}")]
    DimensionTooSmall { needed: usize, got: usize },

    #[error("development requires a quasi-homogeneous polynomial")]
    NotQuasiHomogeneous,

    #[error("development requires degree {degree} ≥ max weight {delta}")]
    DegreeBelowWeights { degree: u64, delta: u32 },

    #[error("exact identity failed: {0}")]
    IdentityFailure(String),

    #[error("denominator vanished during evaluation at {point:?}")]
    DenominatorVanished { point: Vec<f64> },

    #[error("gauge factor is not strictly positive at sample point {point:?} (value {value})")]
    GaugeFactorNotPositive { point: Vec<f64>, value: f64 },

    #[error("no sample points found in the requested region")]
    EmptyRegion,
}
