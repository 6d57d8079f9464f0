//! The conjugation flow that straightens `h = f + g` onto its
//! quasi-homogeneous leading part `f` outside a compact set, together with
//! the quantitative ODE machinery backing it: adaptive Runge–Kutta
//! integration, variational equations, Gronwall bound checkers, the
//! exponential-moment identity, and one-dimensional ray models.

mod conjugate;
mod error;
mod gronwall;
mod lemma;
mod problem;
mod rk;

pub use conjugate::{
    derivative_boundedness_probe, integrate_flow, inverse_map, variational_flow,
    BoundednessProbe, FlowResult, VariationalResult,
};
pub use error::FlowError;
pub use gronwall::{gronwall_26_check, gronwall_28_check, GronwallCase, GronwallReport};
pub use lemma::{exp_integral_identity, lemma29_model, ExpIntegralReport, Lemma29Report};
pub use problem::{
    lower_bound_constant, velocity, velocity_jacobian, ConjugationProblem, LowerBoundEstimate,
};
pub use rk::{integrate_rk45, RkOptions, RkStats};

use crate::polyring::WeightSystem;

/// The weighted norm `⟨x⟩ = sqrt(Σ |x_i|^{2/w_i})`.
pub fn angle_norm(x: &[f64], weights: &WeightSystem) -> f64 {
    weights.angle_norm(x)
}
