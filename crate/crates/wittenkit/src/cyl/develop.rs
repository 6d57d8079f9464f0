//! Development vector fields: the closed-form construction for
//! quasi-homogeneous polynomials (verified by exact ring identities) and
//! the sampled verification of the development conditions for arbitrary
//! candidate fields.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::polyring::{Polynomial, Rational, WeightSystem, WeightedDegree};

use super::error::CylError;
use super::fields::{decompose_field, radial_field, rotation_field, VectorFieldExpr};
use super::growth::{growth_probe_expr, GrowthConfig, GrowthVerdict};
use super::radial::RadialExpr;
use super::rpoly::RPoly;

/// Builds the development `Y = (r/ρ²) Σ w_j x_j ∂_j` with `ρ² = Σ w_k x_k²`
/// for a quasi-homogeneous polynomial of degree `d ≥ max{w_i}`.
///
/// Three identities are verified exactly in the quotient ring before the
/// field is returned:
///
/// * `Y(r) = 1`;
/// * `Y(h) = (r/ρ²)·d·h` (via the Euler identity);
/// * `r·(Y − ∂_r) = Σ_{i<j} [x_i x_j (w_i − w_j)/ρ²]·X_ij`.
pub fn development_quasihomog(
    h: &Polynomial,
    w: &WeightSystem,
) -> Result<VectorFieldExpr, CylError> {
    let n = h.num_vars();
    if w.len() != n {
        return Err(CylError::DimensionMismatch {
            left: w.len(),
            right: n,
        });
    }
    if !h.is_quasi_homogeneous(w)? {
        return Err(CylError::NotQuasiHomogeneous);
    }
    let degree = match h.weighted_degree(w)? {
        WeightedDegree::Finite(d) => d,
        WeightedDegree::MinusInfinity => {
            return Err(CylError::DegreeBelowWeights {
                degree: 0,
                delta: w.delta(),
            })
        }
    };
    if degree < w.delta() as u64 {
        return Err(CylError::DegreeBelowWeights {
            degree,
            delta: w.delta(),
        });
    }

    let rho2 = weighted_radius_squared(w);
    let components: Vec<RadialExpr> = (0..n)
        .map(|i| {
            let wi_xi = Polynomial::variable(n, i)
                .expect("index")
                .scale(&Rational::from_integer(BigInt::from(w.weights()[i])));
            // w_i x_i r / ρ²
            RadialExpr::quotient(
                RPoly {
                    even: Polynomial::zero(n),
                    odd: wi_xi,
                },
                0,
                &[rho2.clone()],
            )
        })
        .collect();
    let field = VectorFieldExpr::new(components)?;

    // Y(r) = 1
    if field.apply(&RadialExpr::r(n)) != RadialExpr::one(n) {
        return Err(CylError::IdentityFailure("Y(r) = 1".into()));
    }
    // Y(h) = (r/ρ²)·d·h
    let lhs = field.apply(&RadialExpr::from_polynomial(h.clone()));
    let rhs = RadialExpr::quotient(
        RPoly {
            even: Polynomial::zero(n),
            odd: h.scale(&Rational::from_integer(BigInt::from(degree))),
        },
        0,
        &[rho2.clone()],
    );
    if lhs != rhs {
        return Err(CylError::IdentityFailure("Y(h) = (r/ρ²)·d·h".into()));
    }
    // r·(Y − ∂_r) = Σ_{i<j} x_i x_j (w_i − w_j)/ρ² · X_ij
    if n >= 2 {
        let dr = radial_field(n)?;
        let lhs_field = field.sub(&dr).scale_expr(&RadialExpr::r(n));
        let mut rhs_field = VectorFieldExpr::zero(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let diff = w.weights()[i] as i64 - w.weights()[j] as i64;
                if diff == 0 {
                    continue;
                }
                let xixj = &(Polynomial::variable(n, i).expect("index"))
                    * &(Polynomial::variable(n, j).expect("index"));
                let coeff = RadialExpr::quotient(
                    RPoly::from_polynomial(
                        xixj.scale(&Rational::from_integer(BigInt::from(diff))),
                    ),
                    0,
                    &[rho2.clone()],
                );
                rhs_field = rhs_field.add(&rotation_field(n, i, j)?.scale_expr(&coeff));
            }
        }
        if lhs_field != rhs_field {
            return Err(CylError::IdentityFailure(
                "r·Y⊥ rotation expansion".into(),
            ));
        }
    }
    Ok(field)
}

/// `ρ² = Σ w_k x_k²`.
pub fn weighted_radius_squared(w: &WeightSystem) -> Polynomial {
    let n = w.len();
    let mut rho2 = Polynomial::zero(n);
    for (i, &wi) in w.weights().iter().enumerate() {
        let mut exp = vec![0u32; n];
        exp[i] = 2;
        rho2 = &rho2
            + &Polynomial::monomial(exp, Rational::from_integer(BigInt::from(wi)));
    }
    rho2
}

/// How the remote regions `{h < −c}` and `{h > c}` are sampled: rejection
/// sampling over spherical shells with per-shell quotas.
#[derive(Debug, Clone)]
pub struct RegionSampling {
    pub shells: Vec<f64>,
    pub per_shell: usize,
    pub attempts_per_shell: usize,
    pub seed: u64,
    /// Derivative-word depth for the boundedness probes.
    pub word_depth: usize,
    pub growth: GrowthConfig,
}

impl Default for RegionSampling {
    fn default() -> Self {
        RegionSampling {
            shells: vec![2.0, 4.0, 8.0, 16.0, 32.0, 64.0],
            per_shell: 48,
            attempts_per_shell: 4000,
            seed: 11,
            word_depth: 2,
            growth: GrowthConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConditionStatus {
    /// Verified as an exact ring identity.
    ExactPass,
    /// Verified on all samples / probes.
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub name: String,
    pub status: ConditionStatus,
    /// Signed margin; its meaning is per condition (worst sampled value for
    /// inequalities, worst fitted exponent for boundedness probes).
    pub margin: Option<f64>,
    pub witness: Option<Vec<f64>>,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Per-condition development verification report.
#[derive(Debug, Clone, Serialize)]
pub struct DevelopmentReport {
    pub conditions: Vec<ConditionReport>,
    pub all_pass: bool,
}

impl DevelopmentReport {
    pub fn condition(&self, name: &str) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// Verifies the development conditions for a candidate field `Y`:
///
/// * (i) strong boundedness of the coefficients of `Y` over `{∂_r, X_ij}`,
///   probed through derivative words;
/// * (ii) weak boundedness of `r·[Z, Y]` for each generator `Z`;
/// * (iii) `Y(r) = 1`, exactly;
/// * (iv) `Y(h/r) ≤ 0` sampled on `{h < −c}` (with the equivalent form
///   (iv') `Y(h) ≤ h/r` reported alongside);
/// * (v) `Y(h) ≥ 0` sampled on `{h > c}`.
pub fn verify_development(
    field: &VectorFieldExpr,
    h: &Polynomial,
    c: f64,
    sampling: &RegionSampling,
) -> Result<DevelopmentReport, CylError> {
    assert!(c > 0.0, "threshold c must be positive");
    let n = field.num_vars();
    if h.num_vars() != n {
        return Err(CylError::DimensionMismatch {
            left: h.num_vars(),
            right: n,
        });
    }
    let mut conditions = Vec::new();

    // (iii) exact identity.
    let yr = field.apply(&RadialExpr::r(n));
    let iii_pass = yr == RadialExpr::one(n);
    conditions.push(ConditionReport {
        name: "(iii) Y(r) = 1".into(),
        status: if iii_pass {
            ConditionStatus::ExactPass
        } else {
            ConditionStatus::Fail
        },
        margin: None,
        witness: None,
        samples: 0,
        note: (!iii_pass).then(|| format!("Y(r) = {yr}")),
    });

    let minus = sample_region(h, n, sampling, |v| v < -c);
    let plus = sample_region(h, n, sampling, |v| v > c);

    // (iv) Y(h/r) ≤ 0 on the negative remote region.
    let h_over_r = RadialExpr::quotient(RPoly::from_polynomial(h.clone()), 1, &[]);
    let y_h_over_r = field.apply(&h_over_r);
    conditions.push(inequality_report(
        "(iv) Y(h/r) ≤ 0 on {h < -c}",
        &minus,
        |x| y_h_over_r.eval_f64(x),
        Direction::NonPositive,
    ));

    // (iv') Y(h) ≤ h/r on the negative remote region.
    let yh = field.apply(&RadialExpr::from_polynomial(h.clone()));
    let gap = &yh - &h_over_r;
    conditions.push(inequality_report(
        "(iv') Y(h) ≤ h/r on {h < -c}",
        &minus,
        |x| gap.eval_f64(x),
        Direction::NonPositive,
    ));

    // (v) Y(h) ≥ 0 on the positive remote region.
    conditions.push(inequality_report(
        "(v) Y(h) ≥ 0 on {h > c}",
        &plus,
        |x| yh.eval_f64(x),
        Direction::NonNegative,
    ));

    // (i)/(ii) boundedness probes against the generators.
    let radii = &sampling.shells;
    let generators = constant_generators(n)?;
    let decomposition = decompose_field(field)?;
    let words = derivative_words(&generators, sampling.word_depth);
    let mut worst_exponent = f64::NEG_INFINITY;
    let mut strong_ok = true;
    let mut strong_note = None;
    for coeff in decomposition.coefficients() {
        for word in &words {
            let refs: Vec<&VectorFieldExpr> = word.iter().map(|f| &generators[*f]).collect();
            let report = growth_probe_expr(coeff, &refs, radii, &sampling.growth)?;
            let bounded = matches!(report.verdict, GrowthVerdict::Bounded);
            if !bounded {
                strong_ok = false;
                if strong_note.is_none() {
                    strong_note = Some(format!(
                        "coefficient probe exponent {:.3} (residual {:.3})",
                        report.exponent, report.residual
                    ));
                }
            }
            if report.exponent.is_finite() {
                worst_exponent = worst_exponent.max(report.exponent);
            }
        }
    }
    conditions.push(ConditionReport {
        name: "(i) Y strongly bounded".into(),
        status: if strong_ok {
            ConditionStatus::Pass
        } else {
            ConditionStatus::Fail
        },
        margin: Some(worst_exponent),
        witness: None,
        samples: words.len(),
        note: strong_note,
    });

    let mut weak_ok = true;
    let mut weak_worst = f64::NEG_INFINITY;
    let mut weak_note = None;
    for z in &generators {
        let commutator = z.bracket(field).scale_expr(&RadialExpr::r(n));
        if commutator.is_zero() {
            continue;
        }
        let dec = decompose_field(&commutator)?;
        for coeff in dec.coefficients() {
            let report = growth_probe_expr(coeff, &[], radii, &sampling.growth)?;
            if !matches!(report.verdict, GrowthVerdict::Bounded) {
                weak_ok = false;
                if weak_note.is_none() {
                    weak_note = Some(format!(
                        "r·[Z,Y] coefficient exponent {:.3}",
                        report.exponent
                    ));
                }
            }
            if report.exponent.is_finite() {
                weak_worst = weak_worst.max(report.exponent);
            }
        }
    }
    conditions.push(ConditionReport {
        name: "(ii) r·[Z,Y] weakly bounded".into(),
        status: if weak_ok {
            ConditionStatus::Pass
        } else {
            ConditionStatus::Fail
        },
        margin: if weak_worst.is_finite() {
            Some(weak_worst)
        } else {
            None
        },
        witness: None,
        samples: generators.len(),
        note: weak_note,
    });

    let all_pass = conditions
        .iter()
        .all(|r| !matches!(r.status, ConditionStatus::Fail));
    Ok(DevelopmentReport {
        conditions,
        all_pass,
    })
}

fn constant_generators(n: usize) -> Result<Vec<VectorFieldExpr>, CylError> {
    let mut generators = vec![radial_field(n)?];
    for i in 0..n {
        for j in (i + 1)..n {
            generators.push(rotation_field(n, i, j)?);
        }
    }
    Ok(generators)
}

fn derivative_words(generators: &[VectorFieldExpr], depth: usize) -> Vec<Vec<usize>> {
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..generators.len() {
                let mut extended = w.clone();
                extended.push(g);
                next.push(extended);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    words
}

enum Direction {
    NonPositive,
    NonNegative,
}

fn inequality_report(
    name: &str,
    samples: &[Vec<f64>],
    value: impl Fn(&[f64]) -> f64,
    direction: Direction,
) -> ConditionReport {
    if samples.is_empty() {
        return ConditionReport {
            name: name.into(),
            status: ConditionStatus::Pass,
            margin: None,
            witness: None,
            samples: 0,
            note: Some("region empty at sampled shells".into()),
        };
    }
    let tol = 1e-9;
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for x in samples {
        let v = value(x);
        let violation = match direction {
            Direction::NonPositive => v,
            Direction::NonNegative => -v,
        };
        if violation > worst {
            worst = violation;
            witness = Some(x.clone());
        }
    }
    let pass = worst <= tol;
    ConditionReport {
        name: name.into(),
        status: if pass {
            ConditionStatus::Pass
        } else {
            ConditionStatus::Fail
        },
        margin: Some(worst),
        witness: if pass { None } else { witness },
        samples: samples.len(),
        note: None,
    }
}

/// Rejection sampling of `{x : predicate(h(x))}` over spherical shells.
pub fn sample_region(
    h: &Polynomial,
    n: usize,
    sampling: &RegionSampling,
    predicate: impl Fn(f64) -> bool,
) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let mut out = Vec::new();
    for &shell in &sampling.shells {
        let mut kept = 0;
        for _ in 0..sampling.attempts_per_shell {
            if kept >= sampling.per_shell {
                break;
            }
            let dir: Vec<f64> = (0..n)
                .map(|_| {
                    let u1: f64 = rng.gen_range(1e-12..1.0);
                    let u2: f64 = rng.gen_range(0.0..1.0);
                    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
                })
                .collect();
            let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-9 {
                continue;
            }
            let x: Vec<f64> = dir.iter().map(|v| v / norm * shell).collect();
            let hv = h.eval_f64(&x).expect("dimension");
            if predicate(hv) {
                out.push(x);
                kept += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(src: &str) -> Polynomial {
        Polynomial::parse(src, &["x", "y"]).unwrap()
    }

    #[test]
    fn equal_weights_development_is_radial() {
        let h = p2("x^2 - y^2");
        let w = WeightSystem::ones(2);
        let field = development_quasihomog(&h, &w).unwrap();
        assert_eq!(field, radial_field(2).unwrap());
    }

    #[test]
    fn weighted_development_euler_identity() {
        // h = x³ + y², weights (2,3): Y(h) = (r/ρ²)·6·h exactly.
        let h = p2("x^3 + y^2");
        let w = WeightSystem::new(vec![2, 3]).unwrap();
        let field = development_quasihomog(&h, &w).unwrap();
        let yh = field.apply(&RadialExpr::from_polynomial(h.clone()));
        let rho2 = weighted_radius_squared(&w);
        let expected = RadialExpr::quotient(
            RPoly {
                even: Polynomial::zero(2),
                odd: h.scale(&Rational::from_integer(6.into())),
            },
            0,
            &[rho2],
        );
        assert_eq!(yh, expected);
    }

    #[test]
    fn rotation_coefficient_for_mixed_weights() {
        // Perpendicular part: r·Y⊥ = [x·y·(w_0 − w_1)/ρ²]·X_01 for n = 2.
        let w = WeightSystem::new(vec![2, 3]).unwrap();
        let h = p2("x^3 + y^2");
        let field = development_quasihomog(&h, &w).unwrap();
        let dr = radial_field(2).unwrap();
        let lhs = field.sub(&dr).scale_expr(&RadialExpr::r(2));
        let rho2 = weighted_radius_squared(&w);
        let coeff = RadialExpr::quotient(
            RPoly::from_polynomial(p2("xy").scale(&Rational::from_integer((-1).into()))),
            0,
            &[rho2],
        );
        let rhs = rotation_field(2, 0, 1).unwrap().scale_expr(&coeff);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn non_quasi_homogeneous_rejected() {
        let h = p2("x^2 + x");
        assert!(matches!(
            development_quasihomog(&h, &WeightSystem::ones(2)),
            Err(CylError::NotQuasiHomogeneous)
        ));
    }

    #[test]
    fn hyperbolic_development_verifies() {
        let h = p2("x^2 - y^2");
        let w = WeightSystem::ones(2);
        let field = development_quasihomog(&h, &w).unwrap();
        let report = verify_development(&field, &h, 10.0, &RegionSampling::default()).unwrap();
        assert!(report.all_pass, "{report:?}");
        assert_eq!(
            report.condition("(iii) Y(r) = 1").unwrap().status,
            ConditionStatus::ExactPass
        );
    }

    #[test]
    fn doubled_radial_field_fails_condition_iii() {
        let h = p2("x^2 - y^2");
        let dr = radial_field(2).unwrap();
        let doubled = dr.scale_expr(&RadialExpr::constant(
            2,
            Rational::from_integer(2.into()),
        ));
        let report =
            verify_development(&doubled, &h, 10.0, &RegionSampling::default()).unwrap();
        assert_eq!(
            report.condition("(iii) Y(r) = 1").unwrap().status,
            ConditionStatus::Fail
        );
        assert!(!report.all_pass);
    }
}
