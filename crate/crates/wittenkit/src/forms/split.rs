//! The parallel/perpendicular split `ω = ω_∥ ∧ dr + ω_⊥` at a point, and
//! the chain-map identity relating `(e^h d_h ω)_∥` to tangential and radial
//! derivatives of the split parts.
//!
//! The split convention is `ω_∥ = (−1)^{k−1} ι_{∂_r} ω`, chosen so the
//! reassembly above holds; it is enforced by a round-trip check at every
//! evaluation point rather than trusted.

use crate::cyl::{rotation_field, VectorFieldExpr};
use crate::polyring::Polynomial;

use super::error::FormError;
use super::form::{witten_differential, PolyForm};
use super::point::PointForm;

/// Pointwise split of a form into `parallel ∧ dr + perp`, both parts
/// annihilated by the radial contraction.
#[derive(Debug, Clone)]
pub struct SplitSample {
    pub point: Vec<f64>,
    pub parallel: PointForm,
    pub perp: PointForm,
}

/// Splits `ω` at a point outside the origin and enforces the round-trip
/// and radial-contraction invariants to 1e-10.
pub fn split(form: &PolyForm, point: &[f64]) -> Result<SplitSample, FormError> {
    let n = form.num_vars();
    assert_eq!(point.len(), n, "dimension mismatch");
    let radius = point.iter().map(|v| v * v).sum::<f64>().sqrt();
    if radius < 1e-12 {
        return Err(FormError::OriginPoint);
    }
    let unit: Vec<f64> = point.iter().map(|v| v / radius).collect();
    let k = form.degree();
    let value = form.eval(point);
    let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let parallel = value.contract(&unit).scale(sign);
    let dr = PointForm::covector(&unit);
    let perp = value.sub(&parallel.wedge(&dr));

    let reassembled = parallel.wedge(&dr).add(&perp);
    let err = reassembled.sub(&value).norm();
    let scale = 1.0 + value.norm();
    if err > 1e-10 * scale {
        return Err(FormError::SplitRoundTrip {
            point: point.to_vec(),
            error: err,
        });
    }
    let contraction_err = parallel
        .contract(&unit)
        .norm()
        .max(perp.contract(&unit).norm());
    if contraction_err > 1e-10 * scale {
        return Err(FormError::SplitRoundTrip {
            point: point.to_vec(),
            error: contraction_err,
        });
    }
    Ok(SplitSample {
        point: point.to_vec(),
        parallel,
        perp,
    })
}

/// Verifies, at each sample point, the gauge-normalized identity
///
/// `(d_h ω)_∥ = [d_Γ ω_∥ + (d_Γ h) ∧ ω_∥] + (−1)^j [∂_t ω_⊥ + (∂_t h)·ω_⊥]`
///
/// on tangential rotation-field tuples. The left side is evaluated from the
/// exact twisted differential; the tangential and radial derivatives on the
/// right are taken by central finite differences along great circles and
/// rays, making the two routes independent. The common factor `e^h` has
/// been divided out analytically, so only polynomial-growth quantities are
/// evaluated. Returns the max relative residual.
pub fn split_identity_check(
    form: &PolyForm,
    h: &Polynomial,
    points: &[Vec<f64>],
) -> Result<f64, FormError> {
    let n = form.num_vars();
    if h.num_vars() != n {
        return Err(FormError::DimensionMismatch {
            left: h.num_vars(),
            right: n,
        });
    }
    let j = form.degree();
    let rotations = all_rotations(n)?;
    let tuples = tangential_tuples(&rotations, j);
    if tuples.is_empty() && j > 0 {
        // No tangential j-tuples in this dimension; nothing to check.
        return Ok(0.0);
    }
    let d_h = witten_differential(form, h)?;

    let mut worst = 0.0f64;
    for point in points {
        let radius = point.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(radius > 1.0 - 1e-9, "points must lie outside the unit ball");
        for tuple in &tuples {
            let fields: Vec<&VectorFieldExpr> = tuple.iter().map(|&i| &rotations[i]).collect();
            let lhs = parallel_on_fields(&d_h, &fields, point);

            // d_Γ ω_∥ via the invariant formula with finite differences for
            // the directional derivatives.
            let mut rhs = 0.0;
            for a in 0..fields.len() {
                let rest: Vec<&VectorFieldExpr> = fields
                    .iter()
                    .enumerate()
                    .filter(|(m, _)| *m != a)
                    .map(|(_, f)| *f)
                    .collect();
                let scalar = |x: &[f64]| parallel_scalar(form, &rest, x);
                let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
                rhs += sign * rotational_derivative(&scalar, tuple[a], point, radius);
            }
            for a in 0..fields.len() {
                for b in (a + 1)..fields.len() {
                    let bracket = fields[a].bracket(fields[b]);
                    let mut args: Vec<&VectorFieldExpr> = vec![&bracket];
                    for (m, f) in fields.iter().enumerate() {
                        if m != a && m != b {
                            args.push(f);
                        }
                    }
                    // 0-based indices: (−1)^{(a+1)+(b+1)} = (−1)^{a+b}
                    let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
                    rhs += sign * parallel_scalar(form, &args[..], point);
                }
            }

            // (d_Γ h) ∧ ω_∥ on the tuple.
            for (a, &fa) in fields.iter().enumerate() {
                let rest: Vec<&VectorFieldExpr> = fields
                    .iter()
                    .enumerate()
                    .filter(|(m, _)| *m != a)
                    .map(|(_, f)| *f)
                    .collect();
                let vh = fa.apply(&crate::cyl::RadialExpr::from_polynomial(h.clone()));
                let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
                rhs += sign * vh.eval_f64(point) * parallel_scalar(form, &rest, point);
            }

            // (−1)^j [∂_t ω_⊥ + ∂_t(h)·ω_⊥] on the tuple; on tangential
            // tuples ω_⊥ agrees with ω.
            let perp_scalar = |x: &[f64]| {
                let vals: Vec<&VectorFieldExpr> = fields.clone();
                form.apply_fields(&vals).eval_f64(x)
            };
            let dt_perp = radial_derivative(&perp_scalar, point, radius);
            let dh_dr: f64 = {
                let grad = h.gradient();
                point
                    .iter()
                    .zip(grad.iter())
                    .map(|(&xi, g)| xi / radius * g.eval_f64(point).expect("dimension"))
                    .sum()
            };
            let j_sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            rhs += j_sign * (dt_perp + dh_dr * perp_scalar(point));

            let residual = (lhs - rhs).abs() / (1.0 + lhs.abs().max(rhs.abs()));
            worst = worst.max(residual);
        }
    }
    Ok(worst)
}

fn all_rotations(n: usize) -> Result<Vec<VectorFieldExpr>, FormError> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(rotation_field(n, i, j)?);
        }
    }
    Ok(out)
}

fn tangential_tuples(rotations: &[VectorFieldExpr], j: usize) -> Vec<Vec<usize>> {
    if j == 0 {
        return vec![Vec::new()];
    }
    if j > rotations.len() {
        return Vec::new();
    }
    // all strictly increasing j-subsets
    let mut out = Vec::new();
    let mut current = Vec::new();
    subsets(0, rotations.len(), j, &mut current, &mut out);
    out
}

fn subsets(
    start: usize,
    end: usize,
    k: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if k == 0 {
        out.push(current.clone());
        return;
    }
    for i in start..=end.saturating_sub(k) {
        current.push(i);
        subsets(i + 1, end, k - 1, current, out);
        current.pop();
    }
}

/// `η_∥` of a (j+1)-form evaluated on a tangential tuple:
/// `(−1)^j · η(∂_r, V_1, …, V_j)` at the point.
fn parallel_on_fields(eta: &PolyForm, fields: &[&VectorFieldExpr], point: &[f64]) -> f64 {
    let j = eta.degree() - 1;
    let value = parallel_scalar_form(eta, fields, point);
    if j % 2 == 0 {
        value
    } else {
        -value
    }
}

fn parallel_scalar_form(eta: &PolyForm, fields: &[&VectorFieldExpr], point: &[f64]) -> f64 {
    // η(∂_r, V...) = contraction of the pointwise form with the unit radial
    // vector, then with the field values.
    let radius = point.iter().map(|v| v * v).sum::<f64>().sqrt();
    let unit: Vec<f64> = point.iter().map(|v| v / radius).collect();
    let mut value = eta.eval(point).contract(&unit);
    for f in fields {
        let v = f.eval_f64(point);
        value = value.contract(&v);
    }
    value.coefficient(&[])
}

/// `ω_∥(W_1..W_{j-1}) = (−1)^{j−1} ω(∂_r, W_1..W_{j−1})` as a scalar.
fn parallel_scalar(form: &PolyForm, fields: &[&VectorFieldExpr], point: &[f64]) -> f64 {
    let j = form.degree();
    let value = parallel_scalar_form(form, fields, point);
    if (j + 1) % 2 == 0 {
        value
    } else {
        -value
    }
}

/// Central finite difference of a scalar along the exact rotation flow in
/// the (i, j) coordinate plane.
fn rotational_derivative(
    scalar: &impl Fn(&[f64]) -> f64,
    rotation_index: usize,
    point: &[f64],
    radius: f64,
) -> f64 {
    let n = point.len();
    let (i, j) = rotation_pair(n, rotation_index);
    let step = 1e-4; // angle step; displacement scales with the radius
    let _ = radius;
    let rotate = |angle: f64| -> Vec<f64> {
        let mut x = point.to_vec();
        let (c, s) = (angle.cos(), angle.sin());
        // flow of X_ij = x_j ∂_i − x_i ∂_j
        x[i] = point[i] * c + point[j] * s;
        x[j] = -point[i] * s + point[j] * c;
        x
    };
    (scalar(&rotate(step)) - scalar(&rotate(-step))) / (2.0 * step)
}

/// Central finite difference along the ray through the point.
fn radial_derivative(scalar: &impl Fn(&[f64]) -> f64, point: &[f64], radius: f64) -> f64 {
    let rel = 1e-6;
    let step = rel * radius;
    let scale_pt = |factor: f64| -> Vec<f64> { point.iter().map(|v| v * factor).collect() };
    let up = 1.0 + rel;
    let down = 1.0 - rel;
    (scalar(&scale_pt(up)) - scalar(&scale_pt(down))) / (2.0 * step)
}

fn rotation_pair(n: usize, index: usize) -> (usize, usize) {
    let mut count = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if count == index {
                return (i, j);
            }
            count += 1;
        }
    }
    panic!("rotation index out of range");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyl::RadialExpr;

    #[test]
    fn split_of_dr_is_parallel_unit() {
        let n = 2;
        let dr = PolyForm::dr(n);
        let sample = split(&dr, &[3.0, 4.0]).unwrap();
        assert!((sample.parallel.coefficient(&[]) - 1.0).abs() < 1e-12);
        assert!(sample.perp.norm() < 1e-12);
    }

    #[test]
    fn split_of_dx_at_pole() {
        // At (0, 1): dr = dy, so dx is purely perpendicular.
        let n = 2;
        let dx = PolyForm::dx(n, 0).unwrap();
        let sample = split(&dx, &[0.0, 1.0]).unwrap();
        assert!(sample.parallel.norm() < 1e-12);
        assert!((sample.perp.coefficient(&[0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn split_rejects_origin() {
        let n = 2;
        let dx = PolyForm::dx(n, 0).unwrap();
        assert!(matches!(
            split(&dx, &[0.0, 0.0]),
            Err(FormError::OriginPoint)
        ));
    }

    #[test]
    fn perp_contraction_vanishes() {
        let n = 3;
        let form = PolyForm::dx(n, 0)
            .unwrap()
            .wedge(&PolyForm::dx(n, 2).unwrap())
            .unwrap()
            .scale_expr(&RadialExpr::var(n, 1));
        let point = [1.0, 2.0, 2.0];
        let sample = split(&form, &point).unwrap();
        let radius: f64 = point.iter().map(|v| v * v).sum::<f64>().sqrt();
        let unit: Vec<f64> = point.iter().map(|v| v / radius).collect();
        assert!(sample.perp.contract(&unit).norm() < 1e-12);
        assert!(sample.parallel.contract(&unit).norm() < 1e-12);
    }

    #[test]
    fn zero_form_identity_residual_is_zero() {
        let n = 2;
        let h = Polynomial::parse("x^2", &["x", "y"]).unwrap();
        let zero = PolyForm::zero(n, 1);
        let points = vec![vec![2.0, 3.0]];
        assert_eq!(split_identity_check(&zero, &h, &points).unwrap(), 0.0);
    }

    #[test]
    fn identity_for_one_form_on_plane() {
        // ω = dx on ℝ², h = x²: residual from independent finite-difference
        // evaluation stays below 1e-6 on shell points.
        let n = 2;
        let h = Polynomial::parse("x^2", &["x", "y"]).unwrap();
        let form = PolyForm::dx(n, 0).unwrap();
        let points: Vec<Vec<f64>> = (0..50)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / 50.0;
                let radius = 2.0 + (k % 5) as f64;
                vec![radius * theta.cos(), radius * theta.sin()]
            })
            .collect();
        let res = split_identity_check(&form, &h, &points).unwrap();
        assert!(res < 1e-6, "residual {res}");
    }

    #[test]
    fn pure_d_case() {
        // ω = x dy, h = 0.
        let n = 2;
        let h = Polynomial::zero(n);
        let form = PolyForm::dx(n, 1).unwrap().scale_expr(&RadialExpr::var(n, 0));
        let points: Vec<Vec<f64>> = (0..25)
            .map(|k| {
                let theta = 0.13 + 2.0 * std::f64::consts::PI * k as f64 / 25.0;
                vec![4.0 * theta.cos(), 4.0 * theta.sin()]
            })
            .collect();
        let res = split_identity_check(&form, &h, &points).unwrap();
        assert!(res < 1e-8, "residual {res}");
    }
}
