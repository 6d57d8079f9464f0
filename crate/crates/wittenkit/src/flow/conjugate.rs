//! Driving the conjugation flow: endpoint maps, invariant monitoring,
//! variational equations with finite-difference cross-validation, the
//! backward inverse, and higher-derivative boundedness probes.

use serde::Serialize;

use super::error::FlowError;
use super::problem::{velocity, velocity_jacobian, ConjugationProblem};
use super::rk::{integrate_rk45, RkOptions};

/// One trajectory of the flow.
#[derive(Debug, Clone, Serialize)]
pub struct FlowResult {
    pub endpoint: Vec<f64>,
    /// Max of `|h_τ(y(τ)) − h(x)| / (1 + |h(x)|)` over accepted steps on
    /// the initial segment where the cutoff equals one; pure integrator
    /// error there, since the flow conserves `h_τ(y(τ))` exactly.
    pub invariant_drift: f64,
    /// Sup over the trajectory of `⟨y(τ) − y(0)⟩`.
    pub displacement: f64,
    /// Whether the cutoff stayed identically one along the trajectory.
    pub stayed_outside_cutoff: bool,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Integrates the flow from `y(0) = x` over `τ ∈ [0, 1]`.
pub fn integrate_flow(
    x: &[f64],
    problem: &ConjugationProblem,
    tol: f64,
) -> Result<FlowResult, FlowError> {
    run_flow(x, problem, tol, 0.0, 1.0)
}

/// Integrates the flow backward from `τ = 1`, which inverts the endpoint
/// map: `inverse_map(integrate_flow(x)) = x` up to integrator error.
pub fn inverse_map(
    y: &[f64],
    problem: &ConjugationProblem,
    tol: f64,
) -> Result<Vec<f64>, FlowError> {
    Ok(run_flow(y, problem, tol, 1.0, 0.0)?.endpoint)
}

fn run_flow(
    x: &[f64],
    problem: &ConjugationProblem,
    tol: f64,
    tau0: f64,
    tau1: f64,
) -> Result<FlowResult, FlowError> {
    assert!(tol > 0.0);
    let h_reference = problem.h_tau(x, tau0);
    let scale = 1.0 + h_reference.abs();
    let mut drift = 0.0f64;
    let mut displacement = 0.0f64;
    let mut in_rho_one_prefix = true;
    let mut stayed_outside = true;
    let options = RkOptions::with_tol(tol);
    let (endpoint, stats) = integrate_rk45(
        |tau, y, dy| {
            let v = velocity(y, tau, problem)?;
            dy.copy_from_slice(&v);
            Ok(())
        },
        tau0,
        tau1,
        x,
        &options,
        |tau, y| {
            let s = problem.angle_norm(y);
            let rho = problem.cutoff(s);
            if rho < 1.0 {
                in_rho_one_prefix = false;
                if rho > 0.0 {
                    stayed_outside = false;
                }
            }
            if in_rho_one_prefix {
                drift = drift.max((problem.h_tau(y, tau) - h_reference).abs() / scale);
            }
            let diff: Vec<f64> = y.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
            displacement = displacement.max(problem.angle_norm(&diff));
        },
    )?;
    Ok(FlowResult {
        endpoint,
        invariant_drift: drift,
        displacement,
        stayed_outside_cutoff: stayed_outside,
        accepted_steps: stats.accepted,
        rejected_steps: stats.rejected,
    })
}

/// Trajectory plus the variational Jacobian `∂φ_i/∂x_k` and its identity
/// deviation record.
#[derive(Debug, Clone, Serialize)]
pub struct VariationalResult {
    pub flow: FlowResult,
    /// `∂φ_i/∂x_k` at τ = 1 (row `i`, column `k`).
    pub jacobian: Vec<Vec<f64>>,
    /// Sup over τ of `max_{i,k} |∂φ_i^τ/∂x_k − δ_ik|`.
    pub sup_identity_deviation: f64,
    pub determinant: f64,
}

/// Co-integrates the `n²` variational equations with the velocity Jacobian
/// evaluated analytically, and cross-validates the resulting endpoint
/// Jacobian against central finite differences of [`integrate_flow`]
/// endpoints (1e-4 relative agreement required).
pub fn variational_flow(
    x: &[f64],
    problem: &ConjugationProblem,
    tol: f64,
) -> Result<VariationalResult, FlowError> {
    let n = problem.dim();
    let mut state = x.to_vec();
    // identity initial condition, row-major
    for i in 0..n {
        for k in 0..n {
            state.push(if i == k { 1.0 } else { 0.0 });
        }
    }
    let mut sup_dev = 0.0f64;
    let h_reference = problem.h(x);
    let scale = 1.0 + h_reference.abs();
    let mut drift = 0.0f64;
    let mut displacement = 0.0f64;
    let mut in_rho_one_prefix = true;
    let mut stayed_outside = true;
    let options = RkOptions::with_tol(tol);
    let (end_state, stats) = integrate_rk45(
        |tau, state, dstate| {
            let y = &state[..n];
            let v = velocity(y, tau, problem)?;
            dstate[..n].copy_from_slice(&v);
            let dv = velocity_jacobian(y, tau, problem)?;
            for i in 0..n {
                for k in 0..n {
                    let mut acc = 0.0;
                    for j in 0..n {
                        acc += dv[i][j] * state[n + j * n + k];
                    }
                    dstate[n + i * n + k] = acc;
                }
            }
            Ok(())
        },
        0.0,
        1.0,
        &state,
        &options,
        |tau, state| {
            let y = &state[..n];
            let s = problem.angle_norm(y);
            let rho = problem.cutoff(s);
            if rho < 1.0 {
                in_rho_one_prefix = false;
                if rho > 0.0 {
                    stayed_outside = false;
                }
            }
            if in_rho_one_prefix {
                drift = drift.max((problem.h_tau(y, tau) - h_reference).abs() / scale);
            }
            let diff: Vec<f64> = y.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
            displacement = displacement.max(problem.angle_norm(&diff));
            for i in 0..n {
                for k in 0..n {
                    let delta = if i == k { 1.0 } else { 0.0 };
                    sup_dev = sup_dev.max((state[n + i * n + k] - delta).abs());
                }
            }
        },
    )?;
    let endpoint = end_state[..n].to_vec();
    let jacobian: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|k| end_state[n + i * n + k]).collect())
        .collect();

    // Independent finite-difference cross-validation of the Jacobian.
    let delta = 1e-5 * (1.0 + problem.angle_norm(x));
    for k in 0..n {
        let mut plus = x.to_vec();
        plus[k] += delta;
        let mut minus = x.to_vec();
        minus[k] -= delta;
        let fp = integrate_flow(&plus, problem, tol)?.endpoint;
        let fm = integrate_flow(&minus, problem, tol)?.endpoint;
        for i in 0..n {
            let fd = (fp[i] - fm[i]) / (2.0 * delta);
            let sym = jacobian[i][k];
            if (sym - fd).abs() > 1e-4 * (1.0 + sym.abs()) {
                return Err(FlowError::JacobianCrossValidation {
                    i,
                    k,
                    symbolic: sym,
                    finite_difference: fd,
                });
            }
        }
    }

    Ok(VariationalResult {
        flow: FlowResult {
            endpoint,
            invariant_drift: drift,
            displacement,
            stayed_outside_cutoff: stayed_outside,
            accepted_steps: stats.accepted,
            rejected_steps: stats.rejected,
        },
        jacobian: jacobian.clone(),
        sup_identity_deviation: sup_dev,
        determinant: determinant(&jacobian),
    })
}

fn determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))
            .expect("nonempty");
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            for c in col..n {
                let delta = factor * a[col][c];
                a[row][c] -= delta;
            }
        }
    }
    det
}

/// Shell sups of order-`p` coordinate derivatives of the endpoint map,
/// probed by nested central finite differences.
#[derive(Debug, Clone, Serialize)]
pub struct BoundednessProbe {
    pub order: usize,
    /// `(shell radius, sup over seeds and multi-indices of |∂^α φ_i|)`.
    pub shell_sups: Vec<(f64, f64)>,
    /// Whether the sups are non-increasing outward (5% slack), consistent
    /// with bounded derivatives.
    pub non_increasing: bool,
}

/// Probes boundedness of the order-`p` partial derivatives of the endpoint
/// map on expanding shells. `p ≤ 3`; each level of differencing multiplies
/// the endpoint evaluations by two, so keep the seed counts small.
pub fn derivative_boundedness_probe(
    problem: &ConjugationProblem,
    order: usize,
    radii: &[f64],
    seeds_per_shell: usize,
    tol: f64,
) -> Result<BoundednessProbe, FlowError> {
    assert!((1..=3).contains(&order), "finite-difference depth cap is 3");
    let n = problem.dim();
    let mut shell_sups = Vec::new();
    for &radius in radii {
        let mut sup = 0.0f64;
        for seed in 0..seeds_per_shell {
            let angle = std::f64::consts::TAU * (seed as f64 + 0.3) / seeds_per_shell as f64;
            let dir: Vec<f64> = match n {
                1 => vec![if seed % 2 == 0 { 1.0 } else { -1.0 }],
                2 => vec![angle.cos(), angle.sin()],
                _ => {
                    let mut d = vec![angle.cos(), angle.sin() * 0.8, angle.sin() * 0.6];
                    d.resize(n, 0.5);
                    d
                }
            };
            let x = problem.weights.to_shell(&dir, radius);
            for alpha in multi_indices(n, order) {
                for i in 0..n {
                    let v = nested_difference(problem, &x, i, &alpha, tol)?;
                    sup = sup.max(v.abs());
                }
            }
        }
        shell_sups.push((radius, sup));
    }
    let non_increasing = shell_sups
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 * 1.05 + 1e-9);
    Ok(BoundednessProbe {
        order,
        shell_sups,
        non_increasing,
    })
}

fn multi_indices(n: usize, order: usize) -> Vec<Vec<usize>> {
    // multi-index as a list of coordinate directions, non-decreasing
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..order {
        let mut next = Vec::new();
        for base in &out {
            let start = base.last().copied().unwrap_or(0);
            for k in start..n {
                let mut e = base.clone();
                e.push(k);
                next.push(e);
            }
        }
        out = next;
    }
    out
}

fn nested_difference(
    problem: &ConjugationProblem,
    x: &[f64],
    component: usize,
    alpha: &[usize],
    tol: f64,
) -> Result<f64, FlowError> {
    match alpha.split_first() {
        None => Ok(integrate_flow(x, problem, tol)?.endpoint[component]),
        Some((&dir, rest)) => {
            let step = 5e-3 * (1.0 + 0.02 * problem.angle_norm(x));
            let mut plus = x.to_vec();
            plus[dir] += step;
            let mut minus = x.to_vec();
            minus[dir] -= step;
            let a = nested_difference(problem, &plus, component, rest, tol)?;
            let b = nested_difference(problem, &minus, component, rest, tol)?;
            Ok((a - b) / (2.0 * step))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{Polynomial, WeightSystem};

    fn quartic_problem() -> ConjugationProblem {
        ConjugationProblem::new(
            Polynomial::parse("x^4 + y^4", &["x", "y"]).unwrap(),
            Polynomial::parse("x^2", &["x", "y"]).unwrap(),
            WeightSystem::ones(2),
            2.0,
            1.0,
        )
        .unwrap()
    }

    fn one_dim_problem() -> ConjugationProblem {
        ConjugationProblem::new(
            Polynomial::parse("x^4", &["x"]).unwrap(),
            Polynomial::parse("x^2", &["x"]).unwrap(),
            WeightSystem::new(vec![1]).unwrap(),
            8.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn fixed_inside_cutoff() {
        let problem = quartic_problem();
        let result = integrate_flow(&[0.4, 0.2], &problem, 1e-10).unwrap();
        assert_eq!(result.endpoint, vec![0.4, 0.2]);
        assert_eq!(result.invariant_drift, 0.0);
    }

    #[test]
    fn one_dimensional_closed_form() {
        // f(φ(3)) = h(3) = 90, so φ(3) = 90^{1/4}.
        let problem = one_dim_problem();
        let result = integrate_flow(&[3.0], &problem, 1e-12).unwrap();
        let expected = 90.0f64.powf(0.25);
        assert!(
            ((result.endpoint[0] - expected) / expected).abs() < 1e-6,
            "endpoint {} expected {expected}",
            result.endpoint[0]
        );
        assert!(result.invariant_drift < 1e-10);
    }

    #[test]
    fn conjugacy_on_plane_seeds() {
        let problem = quartic_problem();
        for k in 0..8 {
            let theta = std::f64::consts::TAU * k as f64 / 8.0;
            let x = [6.0 * theta.cos(), 6.0 * theta.sin()];
            let result = integrate_flow(&x, &problem, 1e-11).unwrap();
            let lhs = problem.leading.eval_f64(&result.endpoint).unwrap();
            let rhs = problem.h(&x);
            assert!(
                (lhs - rhs).abs() <= 1e-6 * (1.0 + rhs.abs()),
                "seed {x:?}: f(φ) = {lhs} vs h = {rhs}"
            );
        }
    }

    #[test]
    fn drift_scales_with_tolerance() {
        let problem = quartic_problem();
        let x = [5.0, 4.0];
        let coarse = integrate_flow(&x, &problem, 1e-6).unwrap().invariant_drift;
        let fine = integrate_flow(&x, &problem, 1e-7).unwrap().invariant_drift;
        assert!(
            fine < coarse / 2.0,
            "drift did not shrink: coarse {coarse}, fine {fine}"
        );
    }

    #[test]
    fn round_trip_through_inverse() {
        let problem = quartic_problem();
        let x = [4.0, -3.0];
        let fwd = integrate_flow(&x, &problem, 1e-11).unwrap();
        let back = inverse_map(&fwd.endpoint, &problem, 1e-11).unwrap();
        let err: f64 = back
            .iter()
            .zip(x.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-5, "round trip error {err}");
    }

    #[test]
    fn variational_jacobian_validates() {
        let problem = quartic_problem();
        let result = variational_flow(&[5.0, 3.0], &problem, 1e-10).unwrap();
        assert!(result.determinant > 0.0);
        assert!(
            result.sup_identity_deviation < 0.5,
            "{}",
            result.sup_identity_deviation
        );
    }

    #[test]
    fn identity_jacobian_inside_cutoff() {
        let problem = quartic_problem();
        let result = variational_flow(&[0.3, 0.1], &problem, 1e-10).unwrap();
        for i in 0..2 {
            for k in 0..2 {
                let expected = if i == k { 1.0 } else { 0.0 };
                assert_eq!(result.jacobian[i][k], expected);
            }
        }
        assert_eq!(result.sup_identity_deviation, 0.0);
    }

    #[test]
    fn first_order_probe_matches_variational() {
        let problem = quartic_problem();
        let x = [8.0, 1.0];
        let variational = variational_flow(&x, &problem, 1e-11).unwrap();
        let fd = nested_difference(&problem, &x, 0, &[0], 1e-11).unwrap();
        assert!(
            (variational.jacobian[0][0] - fd).abs() < 1e-4 * (1.0 + fd.abs()),
            "{} vs {fd}",
            variational.jacobian[0][0]
        );
    }
}
