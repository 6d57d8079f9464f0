//! Reduced elements of `ℚ[x_1..x_n][r] / (r² − Σ x_i²)`.
//!
//! Every element has a unique representative `even + odd·r` with polynomial
//! parts, because the relation replaces `r²` by the radius-squared
//! polynomial. The ring has no zero divisors for `n ≥ 2`; for `n = 1` the
//! denominators used by [`super::RadialExpr`] are still cancellable, so
//! cross-multiplication equality remains sound.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::polyring::{Polynomial, Rational};

/// `even + odd · r`, reduced modulo `r² = Σ x_i²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RPoly {
    pub even: Polynomial,
    pub odd: Polynomial,
}

/// The polynomial `Σ x_i²` that `r²` reduces to.
pub fn radius_squared(num_vars: usize) -> Polynomial {
    let mut q = Polynomial::zero(num_vars);
    for i in 0..num_vars {
        let mut exp = vec![0u32; num_vars];
        exp[i] = 2;
        q = &q + &Polynomial::monomial(exp, Rational::from_integer(1.into()));
    }
    q
}

impl RPoly {
    pub fn zero(num_vars: usize) -> Self {
        RPoly {
            even: Polynomial::zero(num_vars),
            odd: Polynomial::zero(num_vars),
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let n = p.num_vars();
        RPoly {
            even: p,
            odd: Polynomial::zero(n),
        }
    }

    /// The generator `r` itself.
    pub fn r(num_vars: usize) -> Self {
        RPoly {
            even: Polynomial::zero(num_vars),
            odd: Polynomial::constant(num_vars, Rational::from_integer(1.into())),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.even.num_vars()
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    /// Float evaluation with `r = |x|`.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let r = point.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.even.eval_f64(point).expect("dimension")
            + self.odd.eval_f64(point).expect("dimension") * r
    }

    /// Exact evaluation at a point whose radius is rational; the caller
    /// supplies `r` and it is checked against `r² = Σ x_i²`.
    pub fn eval_rational(&self, point: &[Rational], r: &Rational) -> Rational {
        let sum: Rational = point.iter().map(|v| v * v).sum();
        assert_eq!(&(r * r), &sum, "supplied radius does not match the point");
        self.even.eval_rational(point).expect("dimension")
            + self.odd.eval_rational(point).expect("dimension") * r
    }
}

impl Add for &RPoly {
    type Output = RPoly;
    fn add(self, rhs: &RPoly) -> RPoly {
        RPoly {
            even: &self.even + &rhs.even,
            odd: &self.odd + &rhs.odd,
        }
    }
}

impl Sub for &RPoly {
    type Output = RPoly;
    fn sub(self, rhs: &RPoly) -> RPoly {
        RPoly {
            even: &self.even - &rhs.even,
            odd: &self.odd - &rhs.odd,
        }
    }
}

impl Mul for &RPoly {
    type Output = RPoly;
    fn mul(self, rhs: &RPoly) -> RPoly {
        // (a + br)(c + dr) = ac + bd·r² + (ad + bc)·r
        let q = radius_squared(self.num_vars());
        RPoly {
            even: &(&self.even * &rhs.even) + &(&(&self.odd * &rhs.odd) * &q),
            odd: &(&self.even * &rhs.odd) + &(&self.odd * &rhs.even),
        }
    }
}

impl Neg for &RPoly {
    type Output = RPoly;
    fn neg(self) -> RPoly {
        RPoly {
            even: -&self.even,
            odd: -&self.odd,
        }
    }
}

impl fmt::Display for RPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.odd.is_zero() {
            return write!(f, "{}", self.even);
        }
        if self.even.is_zero() {
            return write!(f, "({})*r", self.odd);
        }
        write!(f, "{} + ({})*r", self.even, self.odd)
    }
}

/// Derivative helper: `∂_i (a + br) = [(q·∂_i b + b·x_i) + (∂_i a)·r] / r`
/// using `∂_i r = x_i / r`. Returns the numerator; the caller accounts for
/// the extra factor of `r` in the denominator.
pub fn derivative_numerator(p: &RPoly, i: usize) -> RPoly {
    let n = p.num_vars();
    let q = radius_squared(n);
    let xi = Polynomial::variable(n, i).expect("index checked by caller");
    let da = p.even.partial_derivative(i).expect("index");
    let db = p.odd.partial_derivative(i).expect("index");
    RPoly {
        even: &(&q * &db) + &(&p.odd * &xi),
        odd: da,
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_squared_reduces() {
        let r = RPoly::r(2);
        let r2 = &r * &r;
        assert!(r2.odd.is_zero());
        assert_eq!(r2.even, radius_squared(2));
    }

    #[test]
    fn evaluation_uses_radius() {
        let r = RPoly::r(2);
        assert!((r.eval_f64(&[3.0, 4.0]) - 5.0).abs() < 1e-12);
        let point = [
            Rational::from_integer(3.into()),
            Rational::from_integer(4.into()),
        ];
        assert_eq!(
            r.eval_rational(&point, &Rational::from_integer(5.into())),
            Rational::from_integer(5.into())
        );
    }

    #[test]
    fn derivative_of_r() {
        // ∂_0 r = x_0 / r: numerator should be x_0 with the implicit /r.
        let num = derivative_numerator(&RPoly::r(2), 0);
        assert!(num.odd.is_zero());
        assert_eq!(num.even, Polynomial::parse("x", &["x", "y"]).unwrap());
    }
}
