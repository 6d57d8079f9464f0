use thiserror::Error;

use crate::cyl::CylError;
use crate::quad::QuadratureError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error("form degree {degree} out of range for {num_vars} variables")]
    DegreeOutOfRange { degree: usize, num_vars: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("split is undefined at the origin")]
    OriginPoint,

    #[error("split round-trip failed at {point:?} (error {error})")]
    SplitRoundTrip { point: Vec<f64>, error: f64 },

    #[error("cone element needs global degree ≥ 1, got {0}")]
    ConeDegreeTooSmall(usize),

    #[error("ray is not inside the negative remote region: h({t}) = {value} (need < -{c})")]
    RayNotRemote { t: f64, value: f64, c: f64 },

    #[error("ray value h({t}) = {value} is not decreasing")]
    RayNotDecreasing { t: f64, value: f64 },

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),

    #[error(transparent)]
    Cyl(#[from] Box<CylError>),
}

impl From<CylError> for FormError {
    fn from(e: CylError) -> Self {
        FormError::Cyl(Box::new(e))
    }
}
