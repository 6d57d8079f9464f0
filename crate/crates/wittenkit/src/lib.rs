//! Verification toolkit for the twisted differential `d_h = d + dh ∧ ·`
//! acting on polynomially growing differential forms.
//!
//! The crate is organized around five subsystems:
//!
//! * [`polyring`] — exact sparse multivariate polynomials over the rationals,
//!   weighted degrees, Newton support faces, and the `x_i = y_i^k + y_i`
//!   reduction substitution.
//! * [`cyl`] — the radial quotient ring (polynomials in `x_1..x_n` and a
//!   symbol `r` with `r² = Σ x_i²`), radial/rotation vector fields,
//!   developments, and growth probes.
//! * [`forms`] — differential forms with radial-ring coefficients: `d`,
//!   wedge, `d_h`, the parallel/perpendicular split at infinity, the cone
//!   complex, and remote primitives along rays.
//! * [`topology`] — cubical relative homology of (box, sublevel set) pairs,
//!   with stabilization scans and the product-model comparisons.
//! * [`flow`] — the conjugation flow that straightens `f + g` onto its
//!   quasi-homogeneous leading part `f`, variational equations, Gronwall
//!   bound checkers, and one-dimensional ray models.
//!
//! Everything algebraic is exact (arbitrary-precision rationals); floats
//! enter only in evaluation, sampling, quadrature, and ODE integration,
//! and every numeric certificate carries its margin.

pub mod cyl;
pub mod flow;
pub mod forms;
pub mod polyring;
pub mod quad;
pub mod topology;
