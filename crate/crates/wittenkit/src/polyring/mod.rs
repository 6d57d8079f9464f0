//! Exact sparse multivariate polynomial arithmetic with weighted-degree
//! structure, Newton support faces, numeric critical-point certificates,
//! and the odd-power reduction substitution.

mod critical;
mod error;
mod io;
mod newton;
mod poly;
mod substitute;
mod weights;

pub use critical::{critical_points_only_origin, Certificate, CertificateConfig};
pub use error::PolyError;
pub use io::PolynomialInput;
pub use newton::{detect_case_b, CaseBAttempt, CaseBOutcome, HyperplaneFace, NewtonSupport};
pub use poly::{arith, BinaryOp, Polynomial, Rational};
pub use substitute::{gap_check, substitute_phi, GapCheck};
pub use weights::{euler_identity_check, WeightSystem, WeightedDegree};
