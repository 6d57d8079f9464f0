//! Vector fields with radial-ring coefficients: the radial field `∂_r`,
//! the rotations `X_ij = x_j ∂_i − x_i ∂_j`, derivations, Lie brackets,
//! and the decomposition of coordinate fields over these generators.

use crate::polyring::Polynomial;

use super::error::CylError;
use super::radial::RadialExpr;
use super::rpoly::RPoly;

/// A vector field `Σ component_i · ∂_i` with [`RadialExpr`] components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorFieldExpr {
    components: Vec<RadialExpr>,
}

impl VectorFieldExpr {
    pub fn new(components: Vec<RadialExpr>) -> Result<Self, CylError> {
        let n = components.len();
        if n == 0 {
            return Err(CylError::DimensionTooSmall { needed: 1, got: 0 });
        }
        for c in &components {
            if c.num_vars() != n {
                return Err(CylError::DimensionMismatch {
                    left: c.num_vars(),
                    right: n,
                });
            }
        }
        Ok(VectorFieldExpr { components })
    }

    pub fn zero(num_vars: usize) -> Self {
        VectorFieldExpr {
            components: (0..num_vars).map(|_| RadialExpr::zero(num_vars)).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[RadialExpr] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &RadialExpr {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Derivation: `Y(e) = Σ Y_i ∂_i e`, exact in the quotient ring.
    pub fn apply(&self, e: &RadialExpr) -> RadialExpr {
        assert_eq!(self.num_vars(), e.num_vars(), "dimension mismatch");
        let mut acc = RadialExpr::zero(self.num_vars());
        for (i, comp) in self.components.iter().enumerate() {
            if comp.is_zero() {
                continue;
            }
            acc = &acc + &(comp * &e.derivative(i));
        }
        acc
    }

    /// Exact Lie bracket `[self, other]_i = self(other_i) − other(self_i)`.
    pub fn bracket(&self, other: &VectorFieldExpr) -> VectorFieldExpr {
        assert_eq!(self.num_vars(), other.num_vars(), "dimension mismatch");
        let components = (0..self.num_vars())
            .map(|i| &self.apply(&other.components[i]) - &other.apply(&self.components[i]))
            .collect();
        VectorFieldExpr { components }
    }

    pub fn add(&self, other: &VectorFieldExpr) -> VectorFieldExpr {
        assert_eq!(self.num_vars(), other.num_vars(), "dimension mismatch");
        VectorFieldExpr {
            components: self
                .components
                .iter()
                .zip(other.components.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &VectorFieldExpr) -> VectorFieldExpr {
        assert_eq!(self.num_vars(), other.num_vars(), "dimension mismatch");
        VectorFieldExpr {
            components: self
                .components
                .iter()
                .zip(other.components.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Pointwise scalar (expression) multiple.
    pub fn scale_expr(&self, factor: &RadialExpr) -> VectorFieldExpr {
        VectorFieldExpr {
            components: self.components.iter().map(|c| c * factor).collect(),
        }
    }

    /// Evaluates the field at a float point.
    pub fn eval_f64(&self, point: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval_f64(point)).collect()
    }
}

/// `∂_r = r^{-1} Σ x_i ∂_i`, the radial field.
pub fn radial_field(num_vars: usize) -> Result<VectorFieldExpr, CylError> {
    if num_vars < 1 {
        return Err(CylError::DimensionTooSmall {
            needed: 1,
            got: num_vars,
        });
    }
    let components = (0..num_vars)
        .map(|i| {
            let xi = Polynomial::variable(num_vars, i).expect("index");
            RadialExpr::quotient(RPoly::from_polynomial(xi), 1, &[])
        })
        .collect();
    VectorFieldExpr::new(components)
}

/// The rotation `X_ij = x_j ∂_i − x_i ∂_j` for `i < j`; it annihilates `r`.
pub fn rotation_field(num_vars: usize, i: usize, j: usize) -> Result<VectorFieldExpr, CylError> {
    if i >= j || j >= num_vars {
        return Err(CylError::BadRotationIndices { i, j });
    }
    let mut components: Vec<RadialExpr> = (0..num_vars)
        .map(|_| RadialExpr::zero(num_vars))
        .collect();
    components[i] =
        RadialExpr::from_polynomial(Polynomial::variable(num_vars, j).expect("index"));
    components[j] = -&RadialExpr::from_polynomial(
        Polynomial::variable(num_vars, i).expect("index"),
    );
    VectorFieldExpr::new(components)
}

/// A field written over the constant generators:
/// `Y = radial_coeff · ∂_r + Σ_{i<j} rotation_coeffs[(i,j)] · X_ij`.
#[derive(Debug, Clone)]
pub struct FieldDecomposition {
    pub radial_coeff: RadialExpr,
    pub rotation_coeffs: Vec<(usize, usize, RadialExpr)>,
}

impl FieldDecomposition {
    pub fn reassemble(&self, num_vars: usize) -> Result<VectorFieldExpr, CylError> {
        let mut acc = radial_field(num_vars)?.scale_expr(&self.radial_coeff);
        for (i, j, coeff) in &self.rotation_coeffs {
            acc = acc.add(&rotation_field(num_vars, *i, *j)?.scale_expr(coeff));
        }
        Ok(acc)
    }

    /// All coefficients in a flat list, radial first.
    pub fn coefficients(&self) -> Vec<&RadialExpr> {
        std::iter::once(&self.radial_coeff)
            .chain(self.rotation_coeffs.iter().map(|(_, _, c)| c))
            .collect()
    }
}

/// Writes an arbitrary field over `{∂_r, X_ij}`:
/// the radial coefficient is `Y(r)` and the rotation coefficients are
/// `f_ij = (x_j·Y⊥_i − x_i·Y⊥_j)/r²` for the perpendicular part
/// `Y⊥ = Y − Y(r)·∂_r`. The reassembled field is checked against `Y`
/// exactly before returning.
pub fn decompose_field(field: &VectorFieldExpr) -> Result<FieldDecomposition, CylError> {
    let n = field.num_vars();
    if n < 2 {
        return Err(CylError::DimensionTooSmall { needed: 2, got: n });
    }
    let g = field.apply(&RadialExpr::r(n));
    let dr = radial_field(n)?;
    let perp = field.sub(&dr.scale_expr(&g));
    let inv_r2 = RadialExpr::quotient(
        RPoly::from_polynomial(Polynomial::constant_i64(n, 1)),
        2,
        &[],
    );
    let mut rotation_coeffs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let xi = RadialExpr::var(n, i);
            let xj = RadialExpr::var(n, j);
            let coeff = &(&(&xj * perp.component(i)) - &(&xi * perp.component(j))) * &inv_r2;
            if !coeff.is_zero() {
                rotation_coeffs.push((i, j, coeff));
            }
        }
    }
    let decomposition = FieldDecomposition {
        radial_coeff: g,
        rotation_coeffs,
    };
    let reassembled = decomposition.reassemble(n)?;
    if &reassembled != field {
        return Err(CylError::IdentityFailure(
            "field decomposition over {∂_r, X_ij} did not reassemble".into(),
        ));
    }
    Ok(decomposition)
}

/// Decomposes the coordinate field `∂_k` over the constant generators.
/// One dimension is rejected: there the radial field alone spans, and the
/// caller handles the pure radial case.
pub fn decompose_partial(k: usize, num_vars: usize) -> Result<FieldDecomposition, CylError> {
    if num_vars < 2 {
        return Err(CylError::DimensionTooSmall {
            needed: 2,
            got: num_vars,
        });
    }
    if k >= num_vars {
        return Err(CylError::DimensionMismatch {
            left: k,
            right: num_vars,
        });
    }
    let mut components: Vec<RadialExpr> = (0..num_vars)
        .map(|_| RadialExpr::zero(num_vars))
        .collect();
    components[k] = RadialExpr::one(num_vars);
    decompose_field(&VectorFieldExpr::new(components)?)
}
