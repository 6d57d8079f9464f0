//! Cubical relative homology of (box, sublevel set) pairs: grid complexes,
//! sparse integer Smith reduction with a GF(2) cross-check, stabilization
//! scans over grid parameters, and the product-model comparisons.

mod betti;
mod complex;
mod error;
mod grid;
mod models;
mod scan;
mod snf;

pub use betti::{absolute_homology, fiber_betti, relative_homology, BettiVector, FiberReport};
pub use complex::{build_pair, build_sublevel_pair, CubicalComplex, CubicalPair};
pub use error::TopologyError;
pub use grid::{Axis, GridSpec};
pub use models::{theorem2_model, theorem3_model, Theorem2Report, Theorem3Base, Theorem3Report};
pub use scan::{stabilization_scan, ScanEntry, ScanOutcome, ScanResult};
pub use snf::{gf2_rank, integer_rank_and_divisors, SparseIntMatrix};
