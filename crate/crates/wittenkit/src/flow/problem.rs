//! Conjugation problems: `h_τ = f + (1−τ)g` with a quasi-homogeneous
//! leading part, the ellipticity constants, and the flow velocity with its
//! exact Jacobian.

use serde::Serialize;

use crate::polyring::{
    critical_points_only_origin, CertificateConfig, Polynomial, WeightSystem, WeightedDegree,
};

use super::error::FlowError;

/// All data the flow needs: the polynomials, weights, degrees, and the
/// ellipticity constants guarding the velocity denominator.
#[derive(Debug, Clone)]
pub struct ConjugationProblem {
    pub leading: Polynomial,
    pub perturbation: Polynomial,
    pub weights: WeightSystem,
    /// `d = deg_w f`.
    pub degree: u64,
    /// `δ = max w_i`.
    pub delta: u32,
    /// Ellipticity constant `a` in `Σ ⟨x⟩^{2w_j}(∂h_τ/∂x_j)² ≥ a·⟨x⟩^{2d}`.
    pub ellipticity: f64,
    /// Radius `r1` past which the bound is guarded; the cutoff vanishes
    /// inside `⟨y⟩ ≤ r1` and equals one above `r1 + cutoff_width`.
    pub inner_radius: f64,
    pub cutoff_width: f64,
    grad_f: Vec<Polynomial>,
    grad_g: Vec<Polynomial>,
    hess_f: Vec<Vec<Polynomial>>,
    hess_g: Vec<Vec<Polynomial>>,
}

impl ConjugationProblem {
    /// Validates the hypotheses exactly (quasi-homogeneity, the degree gap
    /// `deg_w g ≤ d − δ`) and numerically (no critical points of `f` off
    /// the origin), then stores the constants.
    pub fn new(
        leading: Polynomial,
        perturbation: Polynomial,
        weights: WeightSystem,
        ellipticity: f64,
        inner_radius: f64,
    ) -> Result<Self, FlowError> {
        let degree = match leading.weighted_degree(&weights)? {
            WeightedDegree::Finite(d) if d >= weights.delta() as u64 => d,
            _ => return Err(FlowError::LeadingPartNotAdmissible),
        };
        if !leading.is_quasi_homogeneous(&weights)? {
            return Err(FlowError::LeadingPartNotAdmissible);
        }
        let max_g = degree - weights.delta() as u64;
        if let WeightedDegree::Finite(dg) = perturbation.weighted_degree(&weights)? {
            if dg > max_g {
                return Err(FlowError::PerturbationDegreeTooHigh {
                    got: dg,
                    max: max_g,
                });
            }
        }
        let certificate =
            critical_points_only_origin(&leading, &weights, &CertificateConfig::default())?;
        if !certificate.pass {
            return Err(FlowError::CriticalPointHypothesis {
                margin: certificate.margin,
            });
        }
        assert!(ellipticity > 0.0 && inner_radius > 0.0);
        let n = leading.num_vars();
        let grad_f = leading.gradient();
        let grad_g = perturbation.gradient();
        let hess = |grad: &[Polynomial]| -> Vec<Vec<Polynomial>> {
            grad.iter()
                .map(|gi| (0..n).map(|m| gi.partial_derivative(m).expect("index")).collect())
                .collect()
        };
        let hess_f = hess(&grad_f);
        let hess_g = hess(&grad_g);
        let delta = weights.delta();
        Ok(ConjugationProblem {
            leading,
            perturbation,
            weights,
            degree,
            delta,
            ellipticity,
            inner_radius,
            cutoff_width: 1.0,
            grad_f,
            grad_g,
            hess_f,
            hess_g,
        })
    }

    /// Builds the problem with `a` and `r1` estimated by
    /// [`lower_bound_constant`].
    pub fn with_estimated_constants(
        leading: Polynomial,
        perturbation: Polynomial,
        weights: WeightSystem,
    ) -> Result<(Self, LowerBoundEstimate), FlowError> {
        let estimate = lower_bound_constant(&leading, &perturbation, &weights)?;
        let problem = ConjugationProblem::new(
            leading,
            perturbation,
            weights,
            estimate.ellipticity,
            estimate.inner_radius,
        )?;
        Ok((problem, estimate))
    }

    pub fn dim(&self) -> usize {
        self.leading.num_vars()
    }

    pub fn angle_norm(&self, x: &[f64]) -> f64 {
        self.weights.angle_norm(x)
    }

    /// `h_τ = f + (1−τ)g` at a float point.
    pub fn h_tau(&self, x: &[f64], tau: f64) -> f64 {
        self.leading.eval_f64(x).expect("dimension")
            + (1.0 - tau) * self.perturbation.eval_f64(x).expect("dimension")
    }

    /// `h = h_0 = f + g`.
    pub fn h(&self, x: &[f64]) -> f64 {
        self.h_tau(x, 0.0)
    }

    fn grad_h_tau(&self, x: &[f64], tau: f64) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                self.grad_f[i].eval_f64(x).expect("dimension")
                    + (1.0 - tau) * self.grad_g[i].eval_f64(x).expect("dimension")
            })
            .collect()
    }

    fn hess_h_tau(&self, x: &[f64], tau: f64, i: usize, m: usize) -> f64 {
        self.hess_f[i][m].eval_f64(x).expect("dimension")
            + (1.0 - tau) * self.hess_g[i][m].eval_f64(x).expect("dimension")
    }

    /// Quintic smoothstep cutoff in `⟨y⟩`, identically 0 below `r1` and 1
    /// above `r1 + width`.
    pub fn cutoff(&self, s: f64) -> f64 {
        let u = ((s - self.inner_radius) / self.cutoff_width).clamp(0.0, 1.0);
        u * u * u * (6.0 * u * u - 15.0 * u + 10.0)
    }

    fn cutoff_derivative(&self, s: f64) -> f64 {
        let u = (s - self.inner_radius) / self.cutoff_width;
        if !(0.0..=1.0).contains(&u) {
            return 0.0;
        }
        30.0 * u * u * (u - 1.0) * (u - 1.0) / self.cutoff_width
    }

    /// `∂⟨y⟩/∂y_m = |y_m|^{2/w_m − 1}·sign(y_m) / (w_m ⟨y⟩)`.
    fn angle_norm_gradient(&self, y: &[f64], s: f64) -> Vec<f64> {
        y.iter()
            .zip(self.weights.weights().iter())
            .map(|(&ym, &wm)| {
                if ym == 0.0 {
                    0.0
                } else {
                    ym.abs().powf(2.0 / wm as f64 - 1.0) * ym.signum() / (wm as f64 * s)
                }
            })
            .collect()
    }
}

/// Estimated ellipticity constants with the observed infimum trace.
#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundEstimate {
    pub ellipticity: f64,
    pub inner_radius: f64,
    /// `(shell radius, infimum of the normalized gradient functional)`.
    pub shell_infima: Vec<(f64, f64)>,
}

/// Estimates `a` and `r1` for `Σ_j ⟨x⟩^{2w_j}(∂h_τ/∂x_j)² ≥ a·⟨x⟩^{2d}`:
/// samples shells `⟨x⟩ ∈ {1, 2, 4, …}` and τ on an 11-point grid, takes
/// the observed infimum from the first radius where it is positive and
/// stable, and halves it as a safety factor.
pub fn lower_bound_constant(
    leading: &Polynomial,
    perturbation: &Polynomial,
    weights: &WeightSystem,
) -> Result<LowerBoundEstimate, FlowError> {
    let n = leading.num_vars();
    let grad_f = leading.gradient();
    let grad_g = perturbation.gradient();
    let degree = match leading.weighted_degree(weights)? {
        WeightedDegree::Finite(d) => d,
        WeightedDegree::MinusInfinity => return Err(FlowError::LeadingPartNotAdmissible),
    };
    let shells: Vec<f64> = (0..8).map(|k| (1u64 << k) as f64).collect();
    let functional = |x: &[f64], tau: f64| -> f64 {
        let s = weights.angle_norm(x);
        let mut acc = 0.0;
        for j in 0..n {
            let bj = grad_f[j].eval_f64(x).expect("dimension")
                + (1.0 - tau) * grad_g[j].eval_f64(x).expect("dimension");
            acc += s.powi(2 * weights.weights()[j] as i32) * bj * bj;
        }
        acc / s.powi(2 * degree as i32)
    };
    let directions = shell_directions(n, 512);
    let mut shell_infima = Vec::new();
    for &shell in &shells {
        let mut inf = f64::INFINITY;
        for tau_idx in 0..=10 {
            let tau = tau_idx as f64 / 10.0;
            for dir in &directions {
                let x = weights.to_shell(dir, shell);
                inf = inf.min(functional(&x, tau));
            }
        }
        shell_infima.push((shell, inf));
    }
    // first index from which the running tail infimum is positive and
    // within a factor of four of the final tail
    let tail_inf: Vec<f64> = (0..shells.len())
        .map(|i| {
            shell_infima[i..]
                .iter()
                .map(|&(_, v)| v)
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let last = *tail_inf.last().expect("nonempty");
    if !(last > 1e-9) {
        return Err(FlowError::HypothesisFailure { observed: last });
    }
    let idx = (0..shells.len())
        .find(|&i| tail_inf[i] > 1e-9 && tail_inf[i] >= last / 4.0)
        .unwrap_or(shells.len() - 1);
    Ok(LowerBoundEstimate {
        ellipticity: 0.5 * tail_inf[idx],
        inner_radius: shells[idx],
        shell_infima,
    })
}

fn shell_directions(n: usize, count: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count + 2 * n);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            out.push(e);
        }
    }
    match n {
        1 => {}
        2 => {
            for k in 0..count {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                out.push(vec![theta.cos(), theta.sin()]);
            }
        }
        _ => {
            let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
            for k in 0..count {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                let rho = (1.0 - z * z).sqrt();
                let phi = 2.0 * std::f64::consts::PI * (k as f64 / golden).fract();
                let mut dir = vec![rho * phi.cos(), rho * phi.sin(), z];
                dir.resize(n, 0.3);
                out.push(dir);
            }
        }
    }
    out
}

/// The flow velocity
/// `v_i = ρ(y)·g(y)·⟨y⟩^{2w_i}·∂h_τ/∂y_i / Σ_j ⟨y⟩^{2w_j}(∂h_τ/∂y_j)²`,
/// identically zero inside the cutoff. The denominator is guarded by the
/// ellipticity constant wherever the cutoff is active.
pub fn velocity(y: &[f64], tau: f64, problem: &ConjugationProblem) -> Result<Vec<f64>, FlowError> {
    let n = problem.dim();
    let s = problem.angle_norm(y);
    if s <= problem.inner_radius {
        return Ok(vec![0.0; n]);
    }
    let rho = problem.cutoff(s);
    let grad = problem.grad_h_tau(y, tau);
    let powers: Vec<f64> = problem
        .weights
        .weights()
        .iter()
        .map(|&w| s.powi(2 * w as i32))
        .collect();
    let denominator: f64 = powers.iter().zip(grad.iter()).map(|(a, b)| a * b * b).sum();
    let required = problem.ellipticity * s.powi(2 * problem.degree as i32) / 4.0;
    if rho > 0.0 && denominator < required {
        return Err(FlowError::EllipticityViolation {
            point: y.to_vec(),
            tau,
            denominator,
            required,
        });
    }
    let g_val = problem.perturbation.eval_f64(y).expect("dimension");
    Ok((0..n)
        .map(|i| rho * g_val * powers[i] * grad[i] / denominator)
        .collect())
}

/// Exact Jacobian `∂v_i/∂y_m` of the velocity, assembled from polynomial
/// derivatives (gradients and Hessians of `f`, `g`) and the closed-form
/// derivatives of the weighted norm powers and the cutoff — no finite
/// differences anywhere.
pub fn velocity_jacobian(
    y: &[f64],
    tau: f64,
    problem: &ConjugationProblem,
) -> Result<Vec<Vec<f64>>, FlowError> {
    let n = problem.dim();
    let s = problem.angle_norm(y);
    if s <= problem.inner_radius {
        return Ok(vec![vec![0.0; n]; n]);
    }
    let rho = problem.cutoff(s);
    let rho_prime = problem.cutoff_derivative(s);
    let s_grad = problem.angle_norm_gradient(y, s);
    let grad = problem.grad_h_tau(y, tau);
    let weights = problem.weights.weights();
    let powers: Vec<f64> = weights.iter().map(|&w| s.powi(2 * w as i32)).collect();
    let denominator: f64 = powers.iter().zip(grad.iter()).map(|(a, b)| a * b * b).sum();
    let required = problem.ellipticity * s.powi(2 * problem.degree as i32) / 4.0;
    if rho > 0.0 && denominator < required {
        return Err(FlowError::EllipticityViolation {
            point: y.to_vec(),
            tau,
            denominator,
            required,
        });
    }
    let g_val = problem.perturbation.eval_f64(y).expect("dimension");
    let g_grad: Vec<f64> = (0..n)
        .map(|m| problem.grad_g[m].eval_f64(y).expect("dimension"))
        .collect();
    // ∂A_i/∂y_m = 2 w_i s^{2w_i − 1} ∂s/∂y_m
    let power_grad = |i: usize, m: usize| -> f64 {
        2.0 * weights[i] as f64 * s.powi(2 * weights[i] as i32 - 1) * s_grad[m]
    };
    let hess = |i: usize, m: usize| problem.hess_h_tau(y, tau, i, m);
    let denom_grad: Vec<f64> = (0..n)
        .map(|m| {
            (0..n)
                .map(|j| {
                    power_grad(j, m) * grad[j] * grad[j]
                        + 2.0 * powers[j] * grad[j] * hess(j, m)
                })
                .sum()
        })
        .collect();

    let mut jac = vec![vec![0.0; n]; n];
    for i in 0..n {
        let base = g_val * powers[i] * grad[i] / denominator;
        for m in 0..n {
            let quotient_part = g_grad[m] * powers[i] * grad[i] / denominator
                + g_val * power_grad(i, m) * grad[i] / denominator
                + g_val * powers[i] * hess(i, m) / denominator
                - g_val * powers[i] * grad[i] * denom_grad[m] / (denominator * denominator);
            jac[i][m] = rho_prime * s_grad[m] * base + rho * quotient_part;
        }
    }
    Ok(jac)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(src: &str) -> Polynomial {
        Polynomial::parse(src, &["x"]).unwrap()
    }

    fn p2(src: &str) -> Polynomial {
        Polynomial::parse(src, &["x", "y"]).unwrap()
    }

    fn quartic_problem() -> ConjugationProblem {
        ConjugationProblem::new(
            p2("x^4 + y^4"),
            p2("x^2"),
            WeightSystem::ones(2),
            2.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn angle_norm_cases() {
        let w = WeightSystem::ones(2);
        assert!((angle_norm_free(&[3.0, 4.0], &w) - 5.0).abs() < 1e-12);
        let w21 = WeightSystem::new(vec![2, 1]).unwrap();
        assert!((angle_norm_free(&[4.0, 3.0], &w21) - 13.0f64.sqrt()).abs() < 1e-12);
        assert_eq!(angle_norm_free(&[0.0, 0.0], &w), 0.0);
    }

    fn angle_norm_free(x: &[f64], w: &WeightSystem) -> f64 {
        w.angle_norm(x)
    }

    #[test]
    fn degree_gap_enforced() {
        // deg_w g = 4 > d − δ = 3 must be rejected.
        assert!(matches!(
            ConjugationProblem::new(
                p2("x^4 + y^4"),
                p2("y^4"),
                WeightSystem::ones(2),
                1.0,
                1.0
            ),
            Err(FlowError::PerturbationDegreeTooHigh { .. })
        ));
    }

    #[test]
    fn critical_ray_input_rejected() {
        assert!(matches!(
            ConjugationProblem::new(
                p2("x^2y^2"),
                Polynomial::zero(2),
                WeightSystem::ones(2),
                1.0,
                1.0
            ),
            Err(FlowError::CriticalPointHypothesis { .. })
        ));
    }

    #[test]
    fn quartic_lower_bound() {
        // Shell infimum of the normalized functional is 4 at every radius
        // for f = x⁴ + y⁴, g = 0; the estimate halves it.
        let est =
            lower_bound_constant(&p2("x^4 + y^4"), &Polynomial::zero(2), &WeightSystem::ones(2))
                .unwrap();
        assert!(est.ellipticity <= 2.0 + 1e-9, "{}", est.ellipticity);
        assert!(est.ellipticity > 1.5);
    }

    #[test]
    fn round_quadric_lower_bound() {
        let est =
            lower_bound_constant(&p2("x^2 + y^2"), &Polynomial::zero(2), &WeightSystem::ones(2))
                .unwrap();
        assert!((est.ellipticity - 2.0).abs() < 1e-6, "{}", est.ellipticity);
    }

    #[test]
    fn velocity_vanishes_inside_cutoff() {
        let problem = quartic_problem();
        let v = velocity(&[0.5, 0.3], 0.0, &problem).unwrap();
        assert!(v.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn one_dimensional_velocity_formula() {
        // f = x⁴, g = x², τ = 0: v = y²/(4y³ + 2y) ≈ 1/(4y) for large y.
        let problem = ConjugationProblem::new(
            p1("x^4"),
            p1("x^2"),
            WeightSystem::new(vec![1]).unwrap(),
            1.0,
            1.0,
        )
        .unwrap();
        let y = 10.0;
        let v = velocity(&[y], 0.0, &problem).unwrap();
        let expected = y * y / (4.0 * y * y * y + 2.0 * y);
        assert!((v[0] - expected).abs() < 1e-12);
        assert!((v[0] - 1.0 / (4.0 * y)).abs() < 0.002);
    }

    #[test]
    fn velocity_bound_from_degree_gap() {
        // |v_i| ≤ (bc/a²)·⟨y⟩^{w_i − δ}: with equal weights the bound is a
        // constant; check no growth across shells.
        let problem = quartic_problem();
        let mut sups = Vec::new();
        for shell in [4.0, 8.0, 16.0, 32.0] {
            let mut sup = 0.0f64;
            for k in 0..64 {
                let theta = std::f64::consts::TAU * k as f64 / 64.0;
                let y = problem.weights.to_shell(&[theta.cos(), theta.sin()], shell);
                for tau_idx in 0..=4 {
                    let v = velocity(&y, tau_idx as f64 / 4.0, &problem).unwrap();
                    sup = sup.max(v.iter().fold(0.0f64, |m, c| m.max(c.abs())));
                }
            }
            sups.push(sup);
        }
        for w in sups.windows(2) {
            assert!(w[1] <= w[0] * 1.05, "velocity sup grew: {sups:?}");
        }
    }

    #[test]
    fn jacobian_matches_finite_differences_of_velocity() {
        let problem = quartic_problem();
        let y = [3.0, 2.0];
        let tau = 0.3;
        let jac = velocity_jacobian(&y, tau, &problem).unwrap();
        let delta = 1e-6;
        for m in 0..2 {
            let mut plus = y.to_vec();
            plus[m] += delta;
            let mut minus = y.to_vec();
            minus[m] -= delta;
            let vp = velocity(&plus, tau, &problem).unwrap();
            let vm = velocity(&minus, tau, &problem).unwrap();
            for i in 0..2 {
                let fd = (vp[i] - vm[i]) / (2.0 * delta);
                assert!(
                    (jac[i][m] - fd).abs() < 1e-6 * (1.0 + fd.abs()),
                    "entry ({i},{m}): {} vs {fd}",
                    jac[i][m]
                );
            }
        }
    }
}
