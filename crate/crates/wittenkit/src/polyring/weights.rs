//! Positive integer weight systems and weighted degrees.

use num_bigint::BigInt;
use num_rational::BigRational;


use super::error::PolyError;
use super::poly::Polynomial;

/// Positive integer weights `w_1..w_n` together with `δ = max w_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    weights: Vec<u32>,
    delta: u32,
}

impl WeightSystem {
    pub fn new(weights: Vec<u32>) -> Result<Self, PolyError> {
        if weights.is_empty() || weights.iter().any(|&w| w == 0) {
            return Err(PolyError::ZeroWeight);
        }
        let delta = *weights.iter().max().expect("nonempty");
        Ok(WeightSystem { weights, delta })
    }

    /// All-ones weights (total degree).
    pub fn ones(n: usize) -> Self {
        WeightSystem::new(vec![1; n]).expect("positive")
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `δ = max{w_i}`.
    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// Weighted degree `Σ w_i m_i` of a single exponent vector.
    pub fn degree_of(&self, exp: &[u32]) -> u64 {
        exp.iter()
            .zip(self.weights.iter())
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum()
    }

    fn check_dims(&self, p: &Polynomial) -> Result<(), PolyError> {
        if self.weights.len() != p.num_vars() {
            return Err(PolyError::WeightDimension {
                expected: p.num_vars(),
                got: self.weights.len(),
            });
        }
        Ok(())
    }
}

/// Weighted degree of a polynomial; the zero polynomial gets a distinguished
/// sentinel rather than a numeric value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WeightedDegree {
    MinusInfinity,
    Finite(u64),
}

impl WeightedDegree {
    pub fn finite(self) -> Option<u64> {
        match self {
            WeightedDegree::MinusInfinity => None,
            WeightedDegree::Finite(d) => Some(d),
        }
    }
}

impl Polynomial {
    /// Maximum weighted degree over terms, with the minus-infinity sentinel
    /// for the zero polynomial.
    pub fn weighted_degree(&self, w: &WeightSystem) -> Result<WeightedDegree, PolyError> {
        w.check_dims(self)?;
        Ok(self
            .terms()
            .map(|(e, _)| w.degree_of(e))
            .max()
            .map_or(WeightedDegree::MinusInfinity, WeightedDegree::Finite))
    }

    /// True when every term shares the same weighted degree. The zero
    /// polynomial counts as quasi-homogeneous.
    pub fn is_quasi_homogeneous(&self, w: &WeightSystem) -> Result<bool, PolyError> {
        w.check_dims(self)?;
        let mut degrees = self.terms().map(|(e, _)| w.degree_of(e));
        match degrees.next() {
            None => Ok(true),
            Some(first) => Ok(degrees.all(|d| d == first)),
        }
    }
}

/// Exact check of the Euler identity `Σ w_i x_i ∂_i f = deg_w(f) · f`.
///
/// Returns `false` for non-quasi-homogeneous input (the identity fails term
/// by term) and `true` for the zero polynomial.
pub fn euler_identity_check(f: &Polynomial, w: &WeightSystem) -> Result<bool, PolyError> {
    if w.len() != f.num_vars() {
        return Err(PolyError::WeightDimension {
            expected: f.num_vars(),
            got: w.len(),
        });
    }
    let degree = match f.weighted_degree(w)? {
        WeightedDegree::MinusInfinity => return Ok(true),
        WeightedDegree::Finite(d) => d,
    };
    let mut lhs = Polynomial::zero(f.num_vars());
    for i in 0..f.num_vars() {
        let xi = Polynomial::variable(f.num_vars(), i)?;
        let wi = Polynomial::constant(
            f.num_vars(),
            BigRational::from_integer(BigInt::from(w.weights()[i])),
        );
        lhs = &lhs + &(&(&wi * &xi) * &f.partial_derivative(i)?);
    }
    let rhs = f.scale(&BigRational::from_integer(BigInt::from(degree)));
    Ok(&lhs - &rhs == Polynomial::zero(f.num_vars()))
}
