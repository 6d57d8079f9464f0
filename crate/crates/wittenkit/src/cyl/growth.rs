//! Polynomial-growth probes: given a scalar field and a word of derivative
//! fields, fit `sup_{|x|=R} |D(f)|` against `C·R^n` in log-log scale.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::error::CylError;
use super::fields::VectorFieldExpr;
use super::radial::RadialExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GrowthVerdict {
    /// Good log-log fit with positive exponent.
    Polynomial,
    /// Good fit with exponent at or below the bounded threshold.
    Bounded,
    /// No acceptable power-law fit (includes exponential growth).
    UnboundedOrNoFit,
}

/// Fitted growth law `|D(f)| ≲ C·R^n` over spheres.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub exponent: f64,
    pub constant: f64,
    pub residual: f64,
    pub verdict: GrowthVerdict,
    /// `(radius, sup |value|)` pairs the fit was computed from.
    pub sups: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct GrowthConfig {
    pub samples_per_radius: usize,
    pub seed: u64,
    /// Max absolute log-residual for an acceptable power-law fit.
    pub fit_residual_threshold: f64,
    /// Exponents at or below this count as bounded.
    pub bounded_exponent: f64,
    /// Relative step for nested finite differences in the numeric path.
    pub fd_step_rel: f64,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            samples_per_radius: 64,
            seed: 7,
            fit_residual_threshold: 0.25,
            bounded_exponent: 0.1,
            fd_step_rel: 1e-5,
        }
    }
}

fn check_radii(radii: &[f64]) -> Result<(), CylError> {
    if radii.len() < 2 || radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] <= 0.0 {
        return Err(CylError::EmptyRegion);
    }
    Ok(())
}

fn sphere_directions(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dirs = Vec::with_capacity(count + 2 * n);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            dirs.push(e);
        }
    }
    while dirs.len() < count + 2 * n {
        // Box-Muller normals, normalized.
        let v: Vec<f64> = (0..n)
            .map(|_| {
                let u1: f64 = rng.gen_range(1e-12..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            dirs.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    dirs
}

/// Applies a derivative word symbolically (outermost first) and fits the
/// sup over spheres of the exact evaluation.
pub fn growth_probe_expr(
    expr: &RadialExpr,
    word: &[&VectorFieldExpr],
    radii: &[f64],
    config: &GrowthConfig,
) -> Result<GrowthReport, CylError> {
    check_radii(radii)?;
    let mut derived = expr.clone();
    for field in word.iter().rev() {
        derived = field.apply(&derived);
    }
    let n = expr.num_vars();
    let dirs = sphere_directions(n, config.samples_per_radius, config.seed);
    let sups = radii
        .iter()
        .map(|&radius| {
            let sup = dirs
                .iter()
                .map(|d| {
                    let x: Vec<f64> = d.iter().map(|&c| c * radius).collect();
                    derived.eval_f64(&x).abs()
                })
                .fold(0.0f64, f64::max);
            (radius, sup)
        })
        .collect();
    Ok(fit(sups, config))
}

/// Applies a derivative word by nested central finite differences and fits
/// the sup over spheres. At each level the directional derivative along a
/// field `V` is `(g(x + εV(x)) − g(x − εV(x))) / 2ε` with `ε` scaled to the
/// point; the straight-line step agrees with the flow derivative to O(ε²).
pub fn growth_probe_fn(
    f: &dyn Fn(&[f64]) -> f64,
    num_vars: usize,
    word: &[&VectorFieldExpr],
    radii: &[f64],
    config: &GrowthConfig,
) -> Result<GrowthReport, CylError> {
    check_radii(radii)?;
    let dirs = sphere_directions(num_vars, config.samples_per_radius, config.seed);
    let sups = radii
        .iter()
        .map(|&radius| {
            let sup = dirs
                .iter()
                .map(|d| {
                    let x: Vec<f64> = d.iter().map(|&c| c * radius).collect();
                    word_value(f, word, &x, config.fd_step_rel).abs()
                })
                .fold(0.0f64, f64::max);
            (radius, sup)
        })
        .collect();
    Ok(fit(sups, config))
}

fn word_value(f: &dyn Fn(&[f64]) -> f64, word: &[&VectorFieldExpr], x: &[f64], step: f64) -> f64 {
    match word.split_first() {
        None => f(x),
        Some((field, rest)) => {
            let v = field.eval_f64(x);
            let vmax = v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            if vmax == 0.0 {
                return 0.0;
            }
            let norm_x = x.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            let eps = step * (1.0 + norm_x) / vmax;
            let plus: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + eps * b).collect();
            let minus: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a - eps * b).collect();
            (word_value(f, rest, &plus, step) - word_value(f, rest, &minus, step)) / (2.0 * eps)
        }
    }
}

fn fit(sups: Vec<(f64, f64)>, config: &GrowthConfig) -> GrowthReport {
    if sups.iter().any(|(_, s)| !s.is_finite()) {
        return GrowthReport {
            exponent: f64::INFINITY,
            constant: f64::INFINITY,
            residual: f64::INFINITY,
            verdict: GrowthVerdict::UnboundedOrNoFit,
            sups,
        };
    }
    if sups.iter().all(|(_, s)| *s < 1e-100) {
        return GrowthReport {
            exponent: 0.0,
            constant: 0.0,
            residual: 0.0,
            verdict: GrowthVerdict::Bounded,
            sups,
        };
    }
    let pts: Vec<(f64, f64)> = sups
        .iter()
        .map(|(r, s)| (r.ln(), s.max(1e-300).ln()))
        .collect();
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let intercept = (sy - slope * sx) / m;
    let residual = pts
        .iter()
        .map(|(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0f64, f64::max);
    let verdict = if residual > config.fit_residual_threshold {
        GrowthVerdict::UnboundedOrNoFit
    } else if slope <= config.bounded_exponent {
        GrowthVerdict::Bounded
    } else {
        GrowthVerdict::Polynomial
    };
    GrowthReport {
        exponent: slope,
        constant: intercept.exp(),
        residual,
        verdict,
        sups,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyl::fields::rotation_field;

    const RADII: [f64; 6] = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0];

    #[test]
    fn radius_squared_has_exponent_two() {
        let n = 2;
        let r = RadialExpr::r(n);
        let r2 = &r * &r;
        let report =
            growth_probe_expr(&r2, &[], &RADII, &GrowthConfig::default()).unwrap();
        assert_eq!(report.verdict, GrowthVerdict::Polynomial);
        assert!((report.exponent - 2.0).abs() < 0.05, "{}", report.exponent);
    }

    #[test]
    fn rotational_derivative_of_bounded_function_grows() {
        // f = x/(1+x²) has bounded partial derivatives, but its rotational
        // derivative grows linearly on spheres, so it is not bounded with
        // all derivatives in the constant-field sense.
        let f = |p: &[f64]| p[0] / (1.0 + p[0] * p[0]);
        let x12 = rotation_field(2, 0, 1).unwrap();
        let base = growth_probe_fn(&f, 2, &[], &RADII, &GrowthConfig::default()).unwrap();
        assert_eq!(base.verdict, GrowthVerdict::Bounded);
        let word = [&x12];
        let report = growth_probe_fn(&f, 2, &word, &RADII, &GrowthConfig::default()).unwrap();
        assert_eq!(report.verdict, GrowthVerdict::Polynomial);
        assert!((report.exponent - 1.0).abs() < 0.1, "{}", report.exponent);
    }

    #[test]
    fn exponential_is_rejected() {
        let f = |p: &[f64]| (p.iter().map(|v| v * v).sum::<f64>().sqrt()).exp();
        let report = growth_probe_fn(&f, 2, &[], &RADII, &GrowthConfig::default()).unwrap();
        assert_eq!(report.verdict, GrowthVerdict::UnboundedOrNoFit);
    }

    #[test]
    fn zero_field_is_bounded() {
        let zero = RadialExpr::zero(2);
        let report = growth_probe_expr(&zero, &[], &RADII, &GrowthConfig::default()).unwrap();
        assert_eq!(report.verdict, GrowthVerdict::Bounded);
        assert_eq!(report.constant, 0.0);
    }

    #[test]
    fn bad_radii_rejected() {
        let zero = RadialExpr::zero(2);
        assert!(growth_probe_expr(&zero, &[], &[2.0], &GrowthConfig::default()).is_err());
        assert!(
            growth_probe_expr(&zero, &[], &[4.0, 2.0], &GrowthConfig::default()).is_err()
        );
    }
}
