//! Degree-k differential forms with [`RadialExpr`] coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::cyl::{RadialExpr, VectorFieldExpr};
use crate::polyring::Polynomial;

use super::error::FormError;
use super::point::PointForm;

/// `Σ_I a_I dx_{i_1} ∧ … ∧ dx_{i_k}` over strictly increasing index tuples,
/// with coefficients in the radial quotient field. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyForm {
    num_vars: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, RadialExpr>,
}

impl PolyForm {
    pub fn zero(num_vars: usize, degree: usize) -> Self {
        PolyForm {
            num_vars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// A 0-form from a scalar expression.
    pub fn scalar(expr: RadialExpr) -> Self {
        let num_vars = expr.num_vars();
        let mut coeffs = BTreeMap::new();
        if !expr.is_zero() {
            coeffs.insert(Vec::new(), expr);
        }
        PolyForm {
            num_vars,
            degree: 0,
            coeffs,
        }
    }

    /// The coordinate 1-form `dx_i`.
    pub fn dx(num_vars: usize, i: usize) -> Result<Self, FormError> {
        if i >= num_vars {
            return Err(FormError::DegreeOutOfRange {
                degree: i,
                num_vars,
            });
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![i], RadialExpr::one(num_vars));
        Ok(PolyForm {
            num_vars,
            degree: 1,
            coeffs,
        })
    }

    /// `dr = Σ (x_i / r) dx_i`, the differential of the radius.
    pub fn dr(num_vars: usize) -> Self {
        let mut form = PolyForm::zero(num_vars, 1);
        for i in 0..num_vars {
            form.add_term(vec![i], RadialExpr::r(num_vars).derivative(i));
        }
        form
    }

    /// `dh = Σ ∂_i h dx_i` for a polynomial `h`.
    pub fn d_polynomial(h: &Polynomial) -> Self {
        let n = h.num_vars();
        let mut form = PolyForm::zero(n, 1);
        for i in 0..n {
            let di = h.partial_derivative(i).expect("index");
            form.add_term(vec![i], RadialExpr::from_polynomial(di));
        }
        form
    }

    pub fn from_terms(
        num_vars: usize,
        degree: usize,
        terms: Vec<(Vec<usize>, RadialExpr)>,
    ) -> Result<Self, FormError> {
        if degree > num_vars {
            return Err(FormError::DegreeOutOfRange { degree, num_vars });
        }
        let mut form = PolyForm::zero(num_vars, degree);
        for (tuple, coeff) in terms {
            if tuple.len() != degree || tuple.windows(2).any(|w| w[0] >= w[1]) {
                return Err(FormError::DegreeMismatch {
                    left: tuple.len(),
                    right: degree,
                });
            }
            form.add_term(tuple, coeff);
        }
        Ok(form)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Vec<usize>, &RadialExpr)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, tuple: &[usize]) -> RadialExpr {
        self.coeffs
            .get(tuple)
            .cloned()
            .unwrap_or_else(|| RadialExpr::zero(self.num_vars))
    }

    fn add_term(&mut self, tuple: Vec<usize>, coeff: RadialExpr) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(tuple) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = &*o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &PolyForm) -> Result<PolyForm, FormError> {
        if self.num_vars != other.num_vars {
            return Err(FormError::DimensionMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut out = self.clone();
        for (tuple, coeff) in &other.coeffs {
            out.add_term(tuple.clone(), coeff.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> PolyForm {
        PolyForm {
            num_vars: self.num_vars,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(t, c)| (t.clone(), -c))
                .collect(),
        }
    }

    pub fn sub(&self, other: &PolyForm) -> Result<PolyForm, FormError> {
        self.add(&other.neg())
    }

    pub fn scale_expr(&self, factor: &RadialExpr) -> PolyForm {
        let mut out = PolyForm::zero(self.num_vars, self.degree);
        for (tuple, coeff) in &self.coeffs {
            out.add_term(tuple.clone(), coeff * factor);
        }
        out
    }

    /// Graded-commutative wedge product. Degrees summing above the
    /// dimension give the zero top-degree-capped form.
    pub fn wedge(&self, other: &PolyForm) -> Result<PolyForm, FormError> {
        if self.num_vars != other.num_vars {
            return Err(FormError::DimensionMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        let degree = self.degree + other.degree;
        if degree > self.num_vars {
            // Identically zero above the top degree; keep the nominal degree
            // so cone bookkeeping stays consistent.
            return Ok(PolyForm::zero(self.num_vars, degree));
        }
        let mut out = PolyForm::zero(self.num_vars, degree);
        for (ta, ca) in &self.coeffs {
            for (tb, cb) in &other.coeffs {
                if let Some((tuple, sign)) = merge_tuples(ta, tb) {
                    let mut coeff = ca * cb;
                    if sign < 0 {
                        coeff = -&coeff;
                    }
                    out.add_term(tuple, coeff);
                }
            }
        }
        Ok(out)
    }

    /// Coordinate exterior derivative `dω = Σ_I d(a_I) ∧ dx_I`, exact in
    /// the quotient ring. Top-degree input returns the zero form.
    pub fn exterior_derivative(&self) -> PolyForm {
        if self.degree >= self.num_vars {
            return PolyForm::zero(self.num_vars, self.degree + 1);
        }
        let mut out = PolyForm::zero(self.num_vars, self.degree + 1);
        for (tuple, coeff) in &self.coeffs {
            for i in 0..self.num_vars {
                let d = coeff.derivative(i);
                if d.is_zero() {
                    continue;
                }
                if let Some((new_tuple, sign)) = insert_index(tuple, i) {
                    out.add_term(new_tuple, if sign < 0 { -&d } else { d });
                }
            }
        }
        out
    }

    /// Interior product with a vector field, exact.
    pub fn contract(&self, field: &VectorFieldExpr) -> PolyForm {
        if self.degree == 0 {
            return PolyForm::zero(self.num_vars, 0);
        }
        let mut out = PolyForm::zero(self.num_vars, self.degree - 1);
        for (tuple, coeff) in &self.coeffs {
            for (pos, &idx) in tuple.iter().enumerate() {
                let comp = field.component(idx);
                if comp.is_zero() {
                    continue;
                }
                let mut rest = tuple.clone();
                rest.remove(pos);
                let mut term = coeff * comp;
                if pos % 2 == 1 {
                    term = -&term;
                }
                out.add_term(rest, term);
            }
        }
        out
    }

    /// Evaluates the form on a tuple of vector fields, exactly:
    /// `ω(V_1, …, V_k)` as a scalar expression.
    pub fn apply_fields(&self, fields: &[&VectorFieldExpr]) -> RadialExpr {
        assert_eq!(fields.len(), self.degree, "need degree-many fields");
        let mut acc = PolyForm::clone(self);
        let mut scalar = None;
        for field in fields {
            acc = acc.contract(field);
            if acc.degree == 0 {
                scalar = Some(acc.coefficient(&[]));
            }
        }
        match (self.degree, scalar) {
            (0, _) => self.coefficient(&[]),
            (_, Some(s)) => s,
            _ => unreachable!("contraction reached degree zero"),
        }
    }

    /// Pointwise evaluation to a numeric form.
    pub fn eval(&self, point: &[f64]) -> PointForm {
        let mut out = PointForm::zero(self.num_vars, self.degree);
        for (tuple, coeff) in &self.coeffs {
            out.add_term(tuple.clone(), coeff.eval_f64(point));
        }
        out
    }
}

/// `dx_i ∧ dx_I`: inserts `i` into a strictly increasing tuple with the
/// sign of the transposition count, or `None` when `i` repeats.
fn insert_index(tuple: &[usize], i: usize) -> Option<(Vec<usize>, i32)> {
    if tuple.contains(&i) {
        return None;
    }
    let pos = tuple.iter().take_while(|&&t| t < i).count();
    let mut out = Vec::with_capacity(tuple.len() + 1);
    out.extend_from_slice(&tuple[..pos]);
    out.push(i);
    out.extend_from_slice(&tuple[pos..]);
    Some((out, if pos % 2 == 0 { 1 } else { -1 }))
}

/// Merges strictly increasing tuples with the shuffle sign, or `None` on a
/// repeated index. Appending `dx_j` on the right and moving it to its slot
/// passes every current element greater than `j`.
fn merge_tuples(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut out = a.to_vec();
    let mut sign = 1i32;
    for &j in b {
        if out.contains(&j) {
            return None;
        }
        let pos = out.iter().take_while(|&&t| t < j).count();
        if (out.len() - pos) % 2 == 1 {
            sign = -sign;
        }
        out.insert(pos, j);
    }
    Some((out, sign))
}

/// The twisted differential `d_h ω = dω + dh ∧ ω`, exact.
pub fn witten_differential(form: &PolyForm, h: &Polynomial) -> Result<PolyForm, FormError> {
    if h.num_vars() != form.num_vars() {
        return Err(FormError::DimensionMismatch {
            left: h.num_vars(),
            right: form.num_vars(),
        });
    }
    let d = form.exterior_derivative();
    if form.degree() >= form.num_vars() {
        return Ok(d);
    }
    let dh = PolyForm::d_polynomial(h);
    d.add(&dh.wedge(form)?)
}

/// Max residual at the sample points between the coordinate exterior
/// derivative contracted with a field tuple and the invariant formula
///
/// `dω(X_0..X_k) = Σ (−1)^j X_j(ω(.. X̂_j ..)) + Σ (−1)^{i+j} ω([X_i,X_j], ..)`.
pub fn derivative_formula_residual(
    form: &PolyForm,
    fields: &[&VectorFieldExpr],
    points: &[Vec<f64>],
) -> Result<f64, FormError> {
    let k = form.degree();
    assert_eq!(fields.len(), k + 1, "need degree+1 fields");
    let coordinate = form.exterior_derivative().apply_fields(fields);

    let mut invariant = RadialExpr::zero(form.num_vars());
    for j in 0..=k {
        let rest: Vec<&VectorFieldExpr> = fields
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != j)
            .map(|(_, f)| *f)
            .collect();
        let inner = form.apply_fields(&rest);
        let term = fields[j].apply(&inner);
        invariant = if j % 2 == 0 {
            &invariant + &term
        } else {
            &invariant - &term
        };
    }
    for i in 0..=k {
        for j in (i + 1)..=k {
            let bracket = fields[i].bracket(fields[j]);
            let mut args: Vec<&VectorFieldExpr> = vec![&bracket];
            for (m, f) in fields.iter().enumerate() {
                if m != i && m != j {
                    args.push(f);
                }
            }
            let term = form.apply_fields(&args);
            invariant = if (i + j) % 2 == 0 {
                &invariant + &term
            } else {
                &invariant - &term
            };
        }
    }

    let mut residual = 0.0f64;
    for p in points {
        let a = coordinate.eval_f64(p);
        let b = invariant.eval_f64(p);
        residual = residual.max((a - b).abs() / (1.0 + a.abs().max(b.abs())));
    }
    Ok(residual)
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (tuple, coeff) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coeff})")?;
            for idx in tuple {
                write!(f, " dx{idx}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyl::{radial_field, rotation_field};

    fn xexpr(n: usize, i: usize) -> RadialExpr {
        RadialExpr::var(n, i)
    }

    #[test]
    fn d_of_x_dy() {
        // d(x dy) = dx ∧ dy
        let n = 2;
        let form = PolyForm::dx(n, 1).unwrap().scale_expr(&xexpr(n, 0));
        let d = form.exterior_derivative();
        let dxdy = PolyForm::dx(n, 0)
            .unwrap()
            .wedge(&PolyForm::dx(n, 1).unwrap())
            .unwrap();
        assert_eq!(d, dxdy);
    }

    #[test]
    fn d_squared_vanishes_on_radial_coefficients() {
        let n = 3;
        // ω = (x/r) dy + r dz
        let xr = RadialExpr::r(n).derivative(1); // y/r
        let form = PolyForm::from_terms(
            n,
            1,
            vec![(vec![1], xr), (vec![2], RadialExpr::r(n))],
        )
        .unwrap();
        let dd = form.exterior_derivative().exterior_derivative();
        assert!(dd.is_zero());
    }

    #[test]
    fn d_of_r() {
        // d(r) = Σ (x_i/r) dx_i, exact.
        let n = 2;
        let d = PolyForm::scalar(RadialExpr::r(n)).exterior_derivative();
        assert_eq!(d, PolyForm::dr(n));
    }

    #[test]
    fn wedge_antisymmetry() {
        let n = 2;
        let dx = PolyForm::dx(n, 0).unwrap();
        let dy = PolyForm::dx(n, 1).unwrap();
        assert!(dx.wedge(&dx).unwrap().is_zero());
        let a = dx.wedge(&dy).unwrap();
        let b = dy.wedge(&dx).unwrap();
        assert_eq!(a, b.neg());
    }

    #[test]
    fn wedge_of_scaled_one_forms() {
        // (x dy) ∧ (y dx) = −xy dx∧dy
        let n = 2;
        let xdy = PolyForm::dx(n, 1).unwrap().scale_expr(&xexpr(n, 0));
        let ydx = PolyForm::dx(n, 0).unwrap().scale_expr(&xexpr(n, 1));
        let product = xdy.wedge(&ydx).unwrap();
        let expected = PolyForm::dx(n, 0)
            .unwrap()
            .wedge(&PolyForm::dx(n, 1).unwrap())
            .unwrap()
            .scale_expr(&-&(&xexpr(n, 0) * &xexpr(n, 1)));
        assert_eq!(product, expected);
    }

    #[test]
    fn witten_differential_reduces_to_d_for_zero_h() {
        let n = 2;
        let form = PolyForm::dx(n, 1).unwrap().scale_expr(&xexpr(n, 0));
        let h = Polynomial::zero(n);
        assert_eq!(
            witten_differential(&form, &h).unwrap(),
            form.exterior_derivative()
        );
    }

    #[test]
    fn witten_differential_of_dx() {
        // h = xy, ω = dx: d_h(dx) = dh∧dx = (y dx + x dy)∧dx = −x dx∧dy
        let n = 2;
        let h = Polynomial::parse("xy", &["x", "y"]).unwrap();
        let form = PolyForm::dx(n, 0).unwrap();
        let result = witten_differential(&form, &h).unwrap();
        let expected = PolyForm::dx(n, 0)
            .unwrap()
            .wedge(&PolyForm::dx(n, 1).unwrap())
            .unwrap()
            .scale_expr(&-&xexpr(n, 0));
        assert_eq!(result, expected);
    }

    #[test]
    fn top_degree_derivative_is_zero_form() {
        let n = 2;
        let top = PolyForm::dx(n, 0)
            .unwrap()
            .wedge(&PolyForm::dx(n, 1).unwrap())
            .unwrap();
        assert!(top.exterior_derivative().is_zero());
    }

    #[test]
    fn invariant_formula_matches_coordinate_derivative() {
        let n = 2;
        let form = PolyForm::dx(n, 1).unwrap().scale_expr(&xexpr(n, 0));
        let dr = radial_field(n).unwrap();
        let rot = rotation_field(n, 0, 1).unwrap();
        let points = vec![vec![3.0, 4.0], vec![-2.0, 5.0], vec![1.5, -1.0]];
        let res = derivative_formula_residual(&form, &[&dr, &rot], &points).unwrap();
        assert!(res < 1e-9, "residual {res}");
    }

    #[test]
    fn contraction_is_graded() {
        // ι_V(dx∧dy) = V_x dy − V_y dx
        let n = 2;
        let dxdy = PolyForm::dx(n, 0)
            .unwrap()
            .wedge(&PolyForm::dx(n, 1).unwrap())
            .unwrap();
        let dr = radial_field(n).unwrap();
        let contracted = dxdy.contract(&dr);
        let expected = PolyForm::from_terms(
            n,
            1,
            vec![
                (vec![1], dr.component(0).clone()),
                (vec![0], -dr.component(1)),
            ],
        )
        .unwrap();
        assert_eq!(contracted, expected);
    }
}
