//! Newton support, supporting hyperplane faces, and leading forms.

use std::collections::BTreeSet;

use num_integer::Integer;

use super::critical::{critical_points_only_origin, Certificate, CertificateConfig};
use super::error::PolyError;
use super::poly::Polynomial;
use super::weights::WeightSystem;

/// The set of exponent vectors appearing in a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonSupport {
    points: BTreeSet<Vec<u32>>,
}

impl NewtonSupport {
    pub fn of(p: &Polynomial) -> Self {
        NewtonSupport {
            points: p.terms().map(|(e, _)| e.clone()).collect(),
        }
    }

    pub fn points(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.points.iter()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A supporting hyperplane `w·m = d` with positive integer normal; the
/// support of the source polynomial lies under it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneFace {
    pub weights: WeightSystem,
    pub degree: u64,
}

impl HyperplaneFace {
    /// Builds the supporting face for the given normal: the degree is the
    /// maximum of `w·m` over the support, so every point lies on or under it.
    pub fn supporting(p: &Polynomial, weights: WeightSystem) -> Result<Self, PolyError> {
        if p.is_zero() {
            return Err(PolyError::ConstantPolynomial);
        }
        let degree = p
            .terms()
            .map(|(e, _)| weights.degree_of(e))
            .max()
            .expect("nonzero polynomial");
        Ok(HyperplaneFace { weights, degree })
    }
}

impl Polynomial {
    /// Sum of the terms lying on the face; errors if any support point lies
    /// strictly above the hyperplane.
    pub fn leading_form(&self, face: &HyperplaneFace) -> Result<Polynomial, PolyError> {
        if face.weights.len() != self.num_vars() {
            return Err(PolyError::WeightDimension {
                expected: self.num_vars(),
                got: face.weights.len(),
            });
        }
        let mut out = Polynomial::zero(self.num_vars());
        for (exp, coeff) in self.terms() {
            let d = face.weights.degree_of(exp);
            if d > face.degree {
                return Err(PolyError::SupportAboveFace {
                    exponent: exp.clone(),
                    found: d,
                    face: face.degree,
                });
            }
            if d == face.degree {
                out.add_term(exp.clone(), coeff.clone());
            }
        }
        Ok(out)
    }
}

/// One candidate face tried during detection, with the certificate margin
/// it achieved.
#[derive(Debug, Clone)]
pub struct CaseBAttempt {
    pub face: HyperplaneFace,
    pub leading_form: Polynomial,
    pub certificate: Certificate,
}

/// Detection outcome: either a face whose leading form has no real critical
/// points away from the origin, or the list of failed attempts.
#[derive(Debug, Clone)]
pub enum CaseBOutcome {
    Detected(CaseBAttempt),
    NotCaseB { attempts: Vec<CaseBAttempt> },
}

/// Searches for a positive-normal supporting hyperplane of the Newton
/// support whose leading form carries a passing no-critical-point
/// certificate. Tries the supplied candidate first, then total degree,
/// then the upper-hull facet normals.
pub fn detect_case_b(
    p: &Polynomial,
    candidate: Option<WeightSystem>,
    config: &CertificateConfig,
) -> Result<CaseBOutcome, PolyError> {
    if p.is_constant() {
        return Err(PolyError::ConstantPolynomial);
    }
    let mut normals: Vec<Vec<u32>> = Vec::new();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let push = |w: Vec<u32>, normals: &mut Vec<Vec<u32>>, seen: &mut BTreeSet<Vec<u32>>| {
        if !seen.contains(&w) {
            seen.insert(w.clone());
            normals.push(w);
        }
    };
    if let Some(w) = candidate {
        if w.len() != p.num_vars() {
            return Err(PolyError::WeightDimension {
                expected: p.num_vars(),
                got: w.len(),
            });
        }
        push(w.weights().to_vec(), &mut normals, &mut seen);
    }
    push(vec![1; p.num_vars()], &mut normals, &mut seen);
    for w in facet_normals(&NewtonSupport::of(p), p.num_vars()) {
        push(w, &mut normals, &mut seen);
    }

    let mut attempts = Vec::new();
    for w in normals {
        let weights = WeightSystem::new(w)?;
        let face = HyperplaneFace::supporting(p, weights)?;
        let leading = p.leading_form(&face)?;
        let certificate = critical_points_only_origin(&leading, &face.weights, config)?;
        let attempt = CaseBAttempt {
            face,
            leading_form: leading,
            certificate,
        };
        if attempt.certificate.pass {
            return Ok(CaseBOutcome::Detected(attempt));
        }
        attempts.push(attempt);
    }
    Ok(CaseBOutcome::NotCaseB { attempts })
}

/// Positive primitive normals of upper-hull facets, enumerated from pairs
/// (n = 2) or triples (n = 3) of support points. Dimensions other than 2, 3
/// fall back to the total-degree normal alone.
fn facet_normals(support: &NewtonSupport, n: usize) -> Vec<Vec<u32>> {
    let pts: Vec<Vec<i64>> = support
        .points()
        .map(|e| e.iter().map(|&x| x as i64).collect())
        .collect();
    let mut out = BTreeSet::new();
    match n {
        2 => {
            for i in 0..pts.len() {
                for j in (i + 1)..pts.len() {
                    let d0 = pts[j][0] - pts[i][0];
                    let d1 = pts[j][1] - pts[i][1];
                    for cand in [[d1, -d0], [-d1, d0]] {
                        if let Some(w) = positive_primitive(&cand) {
                            out.insert(w);
                        }
                    }
                }
            }
        }
        3 => {
            for i in 0..pts.len() {
                for j in (i + 1)..pts.len() {
                    for k in (j + 1)..pts.len() {
                        let u: Vec<i64> = (0..3).map(|a| pts[j][a] - pts[i][a]).collect();
                        let v: Vec<i64> = (0..3).map(|a| pts[k][a] - pts[i][a]).collect();
                        let cross = [
                            u[1] * v[2] - u[2] * v[1],
                            u[2] * v[0] - u[0] * v[2],
                            u[0] * v[1] - u[1] * v[0],
                        ];
                        let neg: Vec<i64> = cross.iter().map(|&c| -c).collect();
                        for cand in [cross.to_vec(), neg] {
                            if let Some(w) = positive_primitive(&cand) {
                                out.insert(w);
                            }
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out.into_iter().collect()
}

fn positive_primitive(v: &[i64]) -> Option<Vec<u32>> {
    if v.iter().any(|&c| c <= 0) {
        return None;
    }
    let g = v.iter().fold(0i64, |acc, &c| acc.gcd(&c));
    Some(v.iter().map(|&c| (c / g) as u32).collect())
}
