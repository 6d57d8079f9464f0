//! Differential forms with radial-ring coefficients: exterior derivative,
//! wedge, the twisted differential `d_h`, the parallel/perpendicular split
//! at infinity, the cone complex of the restriction map, and remote
//! primitives along rays.

mod cone;
mod error;
mod form;
mod point;
mod primitive;
mod sample;
mod split;

pub use cone::{cone_d2_residual, cone_differential, ConeElement};
pub use error::FormError;
pub use form::{derivative_formula_residual, witten_differential, PolyForm};
pub use point::PointForm;
pub use primitive::{remote_primitive, RemotePrimitive};
pub use sample::{random_form, random_polynomial};
pub use split::{split, split_identity_check, SplitSample};
