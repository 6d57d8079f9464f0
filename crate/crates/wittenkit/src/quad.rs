//! Adaptive quadrature and the closed form for exponential-polynomial
//! tail integrals.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature failed to converge on [{a}, {b}] (requested tol {tol})")]
    NoConvergence { a: f64, b: f64, tol: f64 },

    #[error("tail bound failed to converge (last bound {bound} at T = {horizon})")]
    TailBound { bound: f64, horizon: f64 },
}

/// Adaptive Simpson integration of a smooth integrand on `[a, b]` to the
/// given absolute tolerance.
pub fn integrate(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, QuadratureError> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let value = adaptive(f, a, b, fa, fm, fb, whole, tol, 60);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(QuadratureError::NoConvergence { a, b, tol })
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 {
        return f64::NAN;
    }
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1)
}

/// Closed form `∫_t^∞ e^{-aτ} τ^n dτ = e^{-at}·tⁿ·n!·a⁻¹·Σ_{i=0}^n (ta)^{i-n}/i!`
/// for `a > 0`, integer `n ≥ 0`, `t > 0`.
pub fn exp_poly_tail(a: f64, n: u32, t: f64) -> f64 {
    assert!(a > 0.0 && t > 0.0);
    let mut factorial = 1.0f64;
    for i in 1..=n {
        factorial *= i as f64;
    }
    let ta = t * a;
    let mut sum = 0.0;
    let mut i_fact = 1.0f64;
    for i in 0..=n {
        if i > 0 {
            i_fact *= i as f64;
        }
        sum += ta.powi(i as i32 - n as i32) / i_fact;
    }
    (-a * t).exp() * t.powi(n as i32) * factorial / a * sum
}
