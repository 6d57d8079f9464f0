//! JSON ingestion schema for polynomials.
//!
//! The wire format is
//! `{"vars": ["x","y"], "weights": [1,1], "terms": [{"coeff": "-3/2", "exp": [4,0]}]}`
//! with decimal-free rational coefficient strings; `weights` is optional.

use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::error::PolyError;
use super::poly::Polynomial;
use super::weights::WeightSystem;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialInput {
    pub vars: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    pub terms: Vec<TermInput>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermInput {
    pub coeff: String,
    pub exp: Vec<u32>,
}

impl PolynomialInput {
    pub fn parse_json(src: &str) -> Result<Self, PolyError> {
        serde_json::from_str(src).map_err(|e| PolyError::Parse(e.to_string()))
    }

    pub fn to_polynomial(&self) -> Result<Polynomial, PolyError> {
        let n = self.vars.len();
        let mut p = Polynomial::zero(n);
        for term in &self.terms {
            if term.exp.len() != n {
                return Err(PolyError::Parse(format!(
                    "exponent {:?} has wrong length (expected {n})",
                    term.exp
                )));
            }
            if term.coeff.contains('.') {
                return Err(PolyError::Parse(format!(
                    "coefficient '{}' must be a decimal-free rational p/q",
                    term.coeff
                )));
            }
            let coeff = BigRational::from_str(term.coeff.trim())
                .map_err(|e| PolyError::Parse(format!("bad coefficient '{}': {e}", term.coeff)))?;
            p.add_term(term.exp.clone(), coeff);
        }
        Ok(p)
    }

    pub fn weight_system(&self) -> Result<Option<WeightSystem>, PolyError> {
        match &self.weights {
            None => Ok(None),
            Some(w) => {
                if w.len() != self.vars.len() {
                    return Err(PolyError::WeightDimension {
                        expected: self.vars.len(),
                        got: w.len(),
                    });
                }
                WeightSystem::new(w.clone()).map(Some)
            }
        }
    }

    /// Canonical serialization of a polynomial: terms in the canonical map
    /// order, coefficients as `p` or `p/q`.
    pub fn from_polynomial(p: &Polynomial, vars: &[String], weights: Option<&WeightSystem>) -> Self {
        let terms = p
            .terms()
            .map(|(exp, coeff)| TermInput {
                coeff: if coeff.denom().is_one() {
                    coeff.numer().to_string()
                } else {
                    format!("{}/{}", coeff.numer(), coeff.denom())
                },
                exp: exp.clone(),
            })
            .collect();
        PolynomialInput {
            vars: vars.to_vec(),
            weights: weights.map(|w| w.weights().to_vec()),
            terms,
        }
    }

    /// Deterministic canonical JSON used for hashing and cache keys.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let src = r#"{"vars": ["x","y"], "weights": [1,1],
                      "terms": [{"coeff": "-3/2", "exp": [4,0]},
                                {"coeff": "1", "exp": [0,2]}]}"#;
        let input = PolynomialInput::parse_json(src).unwrap();
        let p = input.to_polynomial().unwrap();
        assert_eq!(p.num_terms(), 2);
        let w = input.weight_system().unwrap().unwrap();
        let back = PolynomialInput::from_polynomial(&p, &["x".into(), "y".into()], Some(&w));
        let q = back.to_polynomial().unwrap();
        assert_eq!(p, q);
        // canonical: serializing twice is byte-identical
        assert_eq!(back.canonical_json(), back.canonical_json());
    }

    #[test]
    fn decimal_coefficients_rejected() {
        let src = r#"{"vars": ["x"], "terms": [{"coeff": "1.5", "exp": [1]}]}"#;
        let input = PolynomialInput::parse_json(src).unwrap();
        assert!(input.to_polynomial().is_err());
    }

    #[test]
    fn repeated_exponents_merge() {
        let src = r#"{"vars": ["x"], "terms": [{"coeff": "1", "exp": [1]},
                                               {"coeff": "-1", "exp": [1]}]}"#;
        let p = PolynomialInput::parse_json(src)
            .unwrap()
            .to_polynomial()
            .unwrap();
        assert!(p.is_zero());
    }
}
