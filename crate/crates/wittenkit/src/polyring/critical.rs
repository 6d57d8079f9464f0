//! Numeric no-critical-point certificates on the weighted unit shell.
//!
//! For quasi-homogeneous `f` the weighted gradient functional
//! `Σ_j ⟨x⟩^{2w_j} (∂f/∂x_j)²` is quasi-homogeneous, so it vanishes away
//! from the origin iff its minimum over the shell `⟨x⟩ = 1` is zero. The
//! certificate reports that minimum as an explicit margin; it is a numeric
//! certificate, not a proof, except in one variable where the check is
//! exact.

use super::error::PolyError;
use super::poly::{rational_to_f64, Polynomial};
use super::weights::WeightSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of a shell minimization.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub pass: bool,
    /// Observed minimum of the weighted gradient functional on the shell.
    pub margin: f64,
    /// Shell point achieving the minimum.
    pub argmin: Vec<f64>,
    /// Number of shell samples examined before refinement.
    pub samples: usize,
}

/// Sampling density and pass threshold for the certificate.
#[derive(Debug, Clone)]
pub struct CertificateConfig {
    pub samples_2d: usize,
    pub samples_3d: usize,
    pub threshold: f64,
    pub refine_starts: usize,
    pub seed: u64,
}

impl Default for CertificateConfig {
    fn default() -> Self {
        CertificateConfig {
            samples_2d: 10_000,
            samples_3d: 100_000,
            threshold: 1e-6,
            refine_starts: 16,
            seed: 0,
        }
    }
}

impl WeightSystem {
    /// The weighted norm `⟨x⟩ = sqrt(Σ |x_i|^{2/w_i})`, homogeneous of
    /// degree one under the scaling `x_i ↦ λ^{w_i} x_i` for `λ > 0`.
    pub fn angle_norm(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(self.weights().iter())
            .map(|(&xi, &wi)| xi.abs().powf(2.0 / wi as f64))
            .sum::<f64>()
            .sqrt()
    }

    /// Rescales a nonzero point onto the shell `⟨x⟩ = target` along the
    /// weighted scaling orbit.
    pub fn to_shell(&self, x: &[f64], target: f64) -> Vec<f64> {
        let norm = self.angle_norm(x);
        let s = target / norm;
        x.iter()
            .zip(self.weights().iter())
            .map(|(&xi, &wi)| xi * s.powi(wi as i32))
            .collect()
    }
}

/// Checks that a quasi-homogeneous polynomial has no real critical points
/// away from the origin, by minimizing `Σ ⟨x⟩^{2w_j}(∂f/∂x_j)²` over the
/// shell `⟨x⟩ = 1`. One-variable inputs are decided exactly.
pub fn critical_points_only_origin(
    f: &Polynomial,
    w: &WeightSystem,
    config: &CertificateConfig,
) -> Result<Certificate, PolyError> {
    if !f.is_quasi_homogeneous(w)? {
        return Err(PolyError::NotQuasiHomogeneous);
    }
    let n = f.num_vars();
    if n == 1 {
        // f = c·x^d; the derivative d·c·x^{d-1} vanishes off the origin
        // iff c = 0 or d = 0.
        let (exp, coeff) = match f.terms().next() {
            None => {
                return Ok(Certificate {
                    pass: false,
                    margin: 0.0,
                    argmin: vec![1.0],
                    samples: 0,
                })
            }
            Some((e, c)) => (e[0], rational_to_f64(c)),
        };
        let pass = exp >= 1 && coeff != 0.0;
        let margin = if pass {
            let dc = exp as f64 * coeff;
            dc * dc
        } else {
            0.0
        };
        return Ok(Certificate {
            pass,
            margin,
            argmin: vec![1.0],
            samples: 1,
        });
    }

    let grad = f.gradient();
    let objective = |x: &[f64]| -> f64 {
        let s = w.angle_norm(x);
        grad.iter()
            .zip(w.weights().iter())
            .map(|(g, &wi)| {
                let gi = g.eval_f64(x).expect("dimension checked");
                s.powi(2 * wi as i32) * gi * gi
            })
            .sum()
    };

    let samples = shell_samples(n, w, config);
    let count = samples.len();
    let mut scored: Vec<(f64, Vec<f64>)> = samples
        .into_iter()
        .map(|x| (objective(&x), x))
        .collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite objective"));
    scored.truncate(config.refine_starts.max(1));

    let mut best = scored[0].clone();
    for (_, start) in &scored {
        let refined = refine_on_shell(&objective, w, start);
        if refined.0 < best.0 {
            best = refined;
        }
    }

    Ok(Certificate {
        pass: best.0 > config.threshold,
        margin: best.0,
        argmin: best.1,
        samples: count,
    })
}

fn shell_samples(n: usize, w: &WeightSystem, config: &CertificateConfig) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    match n {
        2 => {
            let m = config.samples_2d.max(8);
            for k in 0..m {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                out.push(w.to_shell(&[theta.cos(), theta.sin()], 1.0));
            }
        }
        3 => {
            // Fibonacci sphere: deterministic, near-uniform.
            let m = config.samples_3d.max(16);
            let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
            for k in 0..m {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / m as f64;
                let rho = (1.0 - z * z).sqrt();
                let phi = 2.0 * std::f64::consts::PI * (k as f64 / golden).fract();
                out.push(w.to_shell(&[rho * phi.cos(), rho * phi.sin(), z], 1.0));
            }
            // Axis and diagonal points, which dense spirals can miss.
            for i in 0..3 {
                for s in [1.0, -1.0] {
                    let mut x = vec![0.0; 3];
                    x[i] = s;
                    out.push(w.to_shell(&x, 1.0));
                }
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let m = config.samples_3d.max(16);
            for _ in 0..m {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if x.iter().map(|v| v * v).sum::<f64>() > 1e-12 {
                    out.push(w.to_shell(&x, 1.0));
                }
            }
            for i in 0..n {
                for s in [1.0, -1.0] {
                    let mut x = vec![0.0; n];
                    x[i] = s;
                    out.push(w.to_shell(&x, 1.0));
                }
            }
        }
    }
    out
}

/// Coordinate pattern search with shrinking steps, reprojected to the shell.
fn refine_on_shell(
    objective: &impl Fn(&[f64]) -> f64,
    w: &WeightSystem,
    start: &[f64],
) -> (f64, Vec<f64>) {
    let n = start.len();
    let mut x = start.to_vec();
    let mut value = objective(&x);
    let mut step = 0.05;
    while step > 1e-10 {
        let mut improved = false;
        for i in 0..n {
            for sign in [1.0, -1.0] {
                let mut cand = x.clone();
                cand[i] += sign * step;
                if cand.iter().all(|&c| c.abs() < 1e-14) {
                    continue;
                }
                let cand = w.to_shell(&cand, 1.0);
                let v = objective(&cand);
                if v < value {
                    value = v;
                    x = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (value, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(src: &str) -> Polynomial {
        Polynomial::parse(src, &["x", "y"]).unwrap()
    }

    #[test]
    fn quartic_shell_minimum() {
        // Oracle: on the circle, 16(x⁶+y⁶) is minimized at x² = y² = 1/2,
        // giving 16·2·(1/2)³ = 4.
        let cert = critical_points_only_origin(
            &p2("x^4 + y^4"),
            &WeightSystem::ones(2),
            &CertificateConfig::default(),
        )
        .unwrap();
        assert!(cert.pass);
        assert!((cert.margin - 4.0).abs() < 1e-6, "margin {}", cert.margin);
    }

    #[test]
    fn hyperbolic_quadric_passes() {
        let cert = critical_points_only_origin(
            &p2("x^2 - y^2"),
            &WeightSystem::ones(2),
            &CertificateConfig::default(),
        )
        .unwrap();
        assert!(cert.pass);
        assert!((cert.margin - 4.0).abs() < 1e-6);
    }

    #[test]
    fn axis_critical_fails_with_zero_margin() {
        let cert = critical_points_only_origin(
            &p2("x^2y^2"),
            &WeightSystem::ones(2),
            &CertificateConfig::default(),
        )
        .unwrap();
        assert!(!cert.pass);
        assert!(cert.margin.abs() < 1e-12);
    }

    #[test]
    fn non_quasi_homogeneous_rejected() {
        assert!(matches!(
            critical_points_only_origin(
                &p2("x^2 + x"),
                &WeightSystem::ones(2),
                &CertificateConfig::default()
            ),
            Err(PolyError::NotQuasiHomogeneous)
        ));
    }

    #[test]
    fn one_variable_exact() {
        let f = Polynomial::parse("x^4", &["x"]).unwrap();
        let w = WeightSystem::new(vec![1]).unwrap();
        let cert =
            critical_points_only_origin(&f, &w, &CertificateConfig::default()).unwrap();
        assert!(cert.pass);
        assert_eq!(cert.margin, 16.0);
    }

    #[test]
    fn weighted_shell_certificate() {
        // x³ + y² with weights (2,3): gradient (3x², 2y) has no common
        // real zero away from the origin.
        let f = p2("x^3 + y^2");
        let w = WeightSystem::new(vec![2, 3]).unwrap();
        let cert =
            critical_points_only_origin(&f, &w, &CertificateConfig::default()).unwrap();
        assert!(cert.pass);
        assert!(cert.margin > 1e-3);
    }

    #[test]
    fn angle_norm_examples() {
        let w = WeightSystem::ones(2);
        assert!((w.angle_norm(&[3.0, 4.0]) - 5.0).abs() < 1e-12);
        let w2 = WeightSystem::new(vec![2, 1]).unwrap();
        assert!((w2.angle_norm(&[4.0, 3.0]) - 13.0f64.sqrt()).abs() < 1e-12);
        assert_eq!(w.angle_norm(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn zero_polynomial_fails() {
        let f = Polynomial::zero(1);
        let w = WeightSystem::new(vec![1]).unwrap();
        let cert =
            critical_points_only_origin(&f, &w, &CertificateConfig::default()).unwrap();
        assert!(!cert.pass);
        assert_eq!(cert.margin, 0.0);
    }
}
