//! The standard cylindrical structure on ℝⁿ: the radial quotient ring with
//! `r² = Σ x_i²`, radial and rotation vector fields, development
//! construction and verification, and polynomial-growth probes.

mod develop;
mod error;
mod fields;
mod gauge;
mod growth;
mod radial;
mod rpoly;

pub use develop::{
    development_quasihomog, verify_development, ConditionReport, ConditionStatus,
    DevelopmentReport, RegionSampling,
};
pub use error::CylError;
pub use fields::{
    decompose_field, decompose_partial, radial_field, rotation_field, FieldDecomposition,
    VectorFieldExpr,
};
pub use gauge::{gauge_shift, GaugeShiftReport};
pub use growth::{growth_probe_expr, growth_probe_fn, GrowthConfig, GrowthReport, GrowthVerdict};
pub use radial::RadialExpr;
pub use rpoly::RPoly;
