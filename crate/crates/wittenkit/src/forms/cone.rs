//! The cone complex of the restriction map to the negative remote region:
//! elements `(ω, ω′)` with `d(ω, ω′) = (dω, −dω′ + ω|_U)`, materialized on
//! a sample table of region points.

use super::error::FormError;
use super::form::PolyForm;

/// A cone element: a global `j`-form together with a `(j−1)`-form viewed on
/// the remote region, carrying the sample table the region is represented
/// by.
#[derive(Debug, Clone)]
pub struct ConeElement {
    pub global: PolyForm,
    pub relative: PolyForm,
    pub region: Vec<Vec<f64>>,
}

impl ConeElement {
    pub fn new(
        global: PolyForm,
        relative: PolyForm,
        region: Vec<Vec<f64>>,
    ) -> Result<Self, FormError> {
        if global.degree() == 0 {
            return Err(FormError::ConeDegreeTooSmall(0));
        }
        if relative.degree() + 1 != global.degree() {
            return Err(FormError::DegreeMismatch {
                left: global.degree(),
                right: relative.degree(),
            });
        }
        if global.num_vars() != relative.num_vars() {
            return Err(FormError::DimensionMismatch {
                left: global.num_vars(),
                right: relative.num_vars(),
            });
        }
        Ok(ConeElement {
            global,
            relative,
            region,
        })
    }

    /// Values of the relative part on the region table: one numeric form
    /// per sample point.
    pub fn sample_table(&self) -> Vec<super::point::PointForm> {
        self.region.iter().map(|p| self.relative.eval(p)).collect()
    }
}

/// `d(ω, ω′) = (dω, −dω′ + r(ω))` where the restriction map `r` samples the
/// global form on the region table.
pub fn cone_differential(element: &ConeElement) -> Result<ConeElement, FormError> {
    let d_global = element.global.exterior_derivative();
    let restricted = element.global.clone();
    let d_relative = element.relative.exterior_derivative();
    let new_relative = restricted.sub(&d_relative)?;
    ConeElement::new(d_global, new_relative, element.region.clone())
}

/// Max absolute coefficient of `d(d(e))` over the region table; the cone
/// differential squares to zero, so this measures numeric noise only.
pub fn cone_d2_residual(element: &ConeElement) -> Result<f64, FormError> {
    let dd = cone_differential(&cone_differential(element)?)?;
    let mut worst = 0.0f64;
    for p in &element.region {
        worst = worst.max(dd.global.eval(p).norm());
        worst = worst.max(dd.relative.eval(p).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyl::RadialExpr;

    fn shell_points(n: usize, radius: f64, count: usize) -> Vec<Vec<f64>> {
        (0..count)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                let mut p = vec![0.0; n];
                p[0] = radius * theta.cos();
                p[1] = radius * theta.sin();
                p
            })
            .collect()
    }

    #[test]
    fn closed_global_form_maps_to_restriction() {
        // e = (ω, 0) with dω = 0 gives d(e) = (0, ω|_U).
        let n = 2;
        let omega = PolyForm::dx(n, 0).unwrap();
        let zero = PolyForm::zero(n, 0);
        let region = shell_points(n, 3.0, 8);
        let e = ConeElement::new(omega.clone(), zero, region).unwrap();
        let de = cone_differential(&e).unwrap();
        assert!(de.global.is_zero());
        assert_eq!(de.relative, omega);
    }

    #[test]
    fn relative_only_element() {
        // e = (0, ω′) maps to (0, −dω′).
        let n = 2;
        let omega_rel = PolyForm::scalar(RadialExpr::var(n, 0));
        let zero = PolyForm::zero(n, 1);
        let region = shell_points(n, 2.0, 8);
        let e = ConeElement::new(zero, omega_rel.clone(), region).unwrap();
        let de = cone_differential(&e).unwrap();
        assert!(de.global.is_zero());
        assert_eq!(de.relative, omega_rel.exterior_derivative().neg());
    }

    #[test]
    fn cone_differential_squares_to_zero() {
        let n = 2;
        let omega = PolyForm::dx(n, 1)
            .unwrap()
            .scale_expr(&(&RadialExpr::var(n, 0) * &RadialExpr::r(n)));
        let omega_rel = PolyForm::scalar(&RadialExpr::var(n, 1) * &RadialExpr::var(n, 0));
        let region = shell_points(n, 4.0, 16);
        let e = ConeElement::new(omega, omega_rel, region).unwrap();
        let res = cone_d2_residual(&e).unwrap();
        assert!(res <= 1e-9, "residual {res}");
    }

    #[test]
    fn degree_zero_rejected() {
        let n = 2;
        let zero0 = PolyForm::zero(n, 0);
        assert!(matches!(
            ConeElement::new(zero0.clone(), zero0, vec![]),
            Err(FormError::ConeDegreeTooSmall(0))
        ));
    }
}
