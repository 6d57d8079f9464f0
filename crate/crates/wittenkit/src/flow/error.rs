use thiserror::Error;

use crate::forms::FormError;
use crate::polyring::PolyError;
use crate::quad::QuadratureError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error(transparent)]
    Poly(#[from] PolyError),

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),

    #[error(transparent)]
    Form(#[from] Box<FormError>),

    #[error("leading part must be quasi-homogeneous with degree ≥ max weight")]
    LeadingPartNotAdmissible,

    #[error("perturbation weighted degree {got} exceeds the allowed {max}")]
    PerturbationDegreeTooHigh { got: u64, max: u64 },

    #[error("leading part has critical points away from the origin (margin {margin})")]
    CriticalPointHypothesis { margin: f64 },

    #[error("ellipticity lower bound is not positive up to the radius cap (observed {observed})")]
    HypothesisFailure { observed: f64 },

    #[error(
        "ellipticity violation at τ = {tau}: denominator {denominator} below {required} at {point:?}"
    )]
    EllipticityViolation {
        point: Vec<f64>,
        tau: f64,
        denominator: f64,
        required: f64,
    },

    #[error("step size underflow at τ = {tau} (h = {step})")]
    StepSizeUnderflow { tau: f64, step: f64 },

    #[error("integrator exceeded {0} steps")]
    MaxStepsExceeded(usize),

    #[error(
        "jacobian cross-validation failed at entry ({i},{k}): symbolic {symbolic} vs finite-difference {finite_difference}"
    )]
    JacobianCrossValidation {
        i: usize,
        k: usize,
        symbolic: f64,
        finite_difference: f64,
    },

    #[error("declared bound |{name}| failed at ν = {nu}: {value} > {bound}")]
    DeclaredBoundViolation {
        name: &'static str,
        nu: f64,
        value: f64,
        bound: f64,
    },

    #[error("trajectory Cauchy tail {tail} above tolerance {tol} at the horizon")]
    NotConvergent { tail: f64, tol: f64 },
}

impl From<FormError> for FlowError {
    fn from(e: FormError) -> Self {
        FlowError::Form(Box::new(e))
    }
}
