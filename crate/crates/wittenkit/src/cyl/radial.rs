//! Fractions over the radial quotient ring.
//!
//! A [`RadialExpr`] is `num / den` where `num` is a reduced [`RPoly`] and
//! `den` is a formal product `r^a · Π p_j^{e_j}` of the radius symbol and
//! radius-squared-type polynomials (`ρ² = Σ w_k x_k²` and friends). All
//! closed-form fields and coefficients in this crate live in that class,
//! which is closed under ring operations and derivations. Equality is
//! decided exactly by cross-multiplication in the quotient ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::polyring::{Polynomial, Rational};

use super::rpoly::{derivative_numerator, radius_squared, RPoly};

/// Structured denominator `r^{r_power} · Π factor^power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Denom {
    pub r_power: u32,
    pub factors: BTreeMap<Polynomial, u32>,
}

impl Denom {
    fn one() -> Self {
        Denom {
            r_power: 0,
            factors: BTreeMap::new(),
        }
    }

    fn is_one(&self) -> bool {
        self.r_power == 0 && self.factors.is_empty()
    }

    fn mul(&self, other: &Denom) -> Denom {
        let mut factors = self.factors.clone();
        for (p, e) in &other.factors {
            *factors.entry(p.clone()).or_insert(0) += e;
        }
        Denom {
            r_power: self.r_power + other.r_power,
            factors,
        }
    }

    /// Expands the formal product to a reduced ring element.
    fn expand(&self, num_vars: usize) -> RPoly {
        let q = radius_squared(num_vars);
        let mut even = Polynomial::constant(num_vars, Rational::from_integer(1.into()));
        for _ in 0..self.r_power / 2 {
            even = &even * &q;
        }
        for (p, e) in &self.factors {
            for _ in 0..*e {
                even = &even * p;
            }
        }
        if self.r_power % 2 == 1 {
            RPoly {
                odd: even,
                even: Polynomial::zero(num_vars),
            }
        } else {
            RPoly::from_polynomial(even)
        }
    }

    fn eval_f64(&self, point: &[f64]) -> f64 {
        let r = point.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut acc = r.powi(self.r_power as i32);
        for (p, e) in &self.factors {
            acc *= p.eval_f64(point).expect("dimension").powi(*e as i32);
        }
        acc
    }
}

/// Element of the fraction field of the radial quotient ring, with the
/// denominator restricted to radius powers and radius-squared-type
/// polynomial factors.
#[derive(Debug, Clone)]
pub struct RadialExpr {
    num: RPoly,
    den: Denom,
}

impl RadialExpr {
    pub fn zero(num_vars: usize) -> Self {
        RadialExpr {
            num: RPoly::zero(num_vars),
            den: Denom::one(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        RadialExpr::constant(num_vars, Rational::from_integer(1.into()))
    }

    pub fn constant(num_vars: usize, value: Rational) -> Self {
        RadialExpr {
            num: RPoly::from_polynomial(Polynomial::constant(num_vars, value)),
            den: Denom::one(),
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RadialExpr {
            num: RPoly::from_polynomial(p),
            den: Denom::one(),
        }
    }

    pub fn from_rpoly(p: RPoly) -> Self {
        RadialExpr {
            num: p,
            den: Denom::one(),
        }
    }

    /// The variable `x_i`.
    pub fn var(num_vars: usize, i: usize) -> Self {
        RadialExpr::from_polynomial(Polynomial::variable(num_vars, i).expect("index"))
    }

    /// The radius symbol `r`.
    pub fn r(num_vars: usize) -> Self {
        RadialExpr::from_rpoly(RPoly::r(num_vars))
    }

    /// General quotient constructor: `num / (r^{r_power} · Π factors)`.
    /// Factors must be radius-squared-type polynomials (positive definite
    /// away from the origin); this is the callers' obligation.
    pub fn quotient(num: RPoly, r_power: u32, factors: &[Polynomial]) -> Self {
        let mut map = BTreeMap::new();
        for f in factors {
            assert!(!f.is_zero(), "zero denominator factor");
            *map.entry(f.clone()).or_insert(0) += 1;
        }
        let mut out = RadialExpr {
            num,
            den: Denom {
                r_power,
                factors: map,
            },
        };
        out.normalize();
        out
    }

    pub fn num_vars(&self) -> usize {
        self.num.num_vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub(crate) fn numerator(&self) -> &RPoly {
        &self.num
    }

    /// Cancels radius powers and common polynomial factors.
    fn normalize(&mut self) {
        let n = self.num_vars();
        if self.num.is_zero() {
            self.den = Denom::one();
            return;
        }
        let q = radius_squared(n);
        // (e + o·r)/r = o + (e/q)·r whenever q divides e.
        while self.den.r_power > 0 {
            match self.num.even.div_exact(&q) {
                Some(quotient) => {
                    self.num = RPoly {
                        even: self.num.odd.clone(),
                        odd: quotient,
                    };
                    self.den.r_power -= 1;
                }
                None => break,
            }
        }
        let factor_list: Vec<Polynomial> = self.den.factors.keys().cloned().collect();
        for p in factor_list {
            while *self.den.factors.get(&p).unwrap_or(&0) > 0 {
                let de = self.num.even.div_exact(&p);
                let do_ = self.num.odd.div_exact(&p);
                match (de, do_) {
                    (Some(e), Some(o)) => {
                        self.num = RPoly { even: e, odd: o };
                        *self.den.factors.get_mut(&p).expect("present") -= 1;
                    }
                    _ => break,
                }
            }
        }
        self.den.factors.retain(|_, e| *e > 0);
    }

    /// Exact derivation `∂_i`, with `∂_i r = x_i / r`.
    pub fn derivative(&self, i: usize) -> RadialExpr {
        assert!(i < self.num_vars(), "variable index out of range");
        let n = self.num_vars();
        if self.den.is_one() {
            let dnum = derivative_numerator(&self.num, i);
            return RadialExpr::quotient(dnum, 1, &[]);
        }
        let den_exp = self.den.expand(n);
        let dnum = derivative_numerator(&self.num, i);
        let dden = derivative_numerator(&den_exp, i);
        let numerator = &(&dnum * &den_exp) - &(&self.num * &dden);
        let mut den = self.den.mul(&self.den);
        den.r_power += 1;
        let mut out = RadialExpr {
            num: numerator,
            den,
        };
        out.normalize();
        out
    }

    pub fn scale(&self, factor: &Rational) -> RadialExpr {
        let c = RPoly::from_polynomial(Polynomial::constant(self.num_vars(), factor.clone()));
        let mut out = RadialExpr {
            num: &self.num * &c,
            den: self.den.clone(),
        };
        out.normalize();
        out
    }

    /// Float evaluation with `r = |x|`. Sampling away from the origin keeps
    /// the structured denominators nonzero.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    /// Exact evaluation at a point with rational radius `r` (checked).
    pub fn eval_rational(&self, point: &[Rational], r: &Rational) -> Rational {
        let den = self.den.expand(self.num_vars()).eval_rational(point, r);
        self.num.eval_rational(point, r) / den
    }
}

impl PartialEq for RadialExpr {
    fn eq(&self, other: &Self) -> bool {
        // a/b = c/d ⟺ a·d = c·b; denominators are not zero divisors.
        let n = self.num_vars();
        let lhs = &self.num * &other.den.expand(n);
        let rhs = &other.num * &self.den.expand(n);
        lhs == rhs
    }
}

impl Eq for RadialExpr {}

impl Add for &RadialExpr {
    type Output = RadialExpr;
    fn add(self, rhs: &RadialExpr) -> RadialExpr {
        let n = self.num_vars();
        if self.den == rhs.den {
            let mut out = RadialExpr {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
            out.normalize();
            return out;
        }
        let num = &(&self.num * &rhs.den.expand(n)) + &(&rhs.num * &self.den.expand(n));
        let mut out = RadialExpr {
            num,
            den: self.den.mul(&rhs.den),
        };
        out.normalize();
        out
    }
}

impl Sub for &RadialExpr {
    type Output = RadialExpr;
    fn sub(self, rhs: &RadialExpr) -> RadialExpr {
        self + &(-rhs)
    }
}

impl Mul for &RadialExpr {
    type Output = RadialExpr;
    fn mul(self, rhs: &RadialExpr) -> RadialExpr {
        let mut out = RadialExpr {
            num: &self.num * &rhs.num,
            den: self.den.mul(&rhs.den),
        };
        out.normalize();
        out
    }
}

impl Neg for &RadialExpr {
    type Output = RadialExpr;
    fn neg(self) -> RadialExpr {
        RadialExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RadialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ({})", self.num, self.den.expand(self.num_vars()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_fraction_cancels() {
        // (Σ x_i²) / r reduces to r.
        let n = 2;
        let q = radius_squared(n);
        let e = RadialExpr::quotient(RPoly::from_polynomial(q), 1, &[]);
        assert_eq!(e, RadialExpr::r(n));
    }

    #[test]
    fn derivative_of_r_squared() {
        // ∂_0 (r²) = 2x as a polynomial identity.
        let n = 2;
        let r = RadialExpr::r(n);
        let r2 = &r * &r;
        let d = r2.derivative(0);
        let expected =
            RadialExpr::from_polynomial(Polynomial::parse("2x", &["x", "y"]).unwrap());
        assert_eq!(d, expected);
    }

    #[test]
    fn derivative_of_r_is_x_over_r() {
        let n = 2;
        let d = RadialExpr::r(n).derivative(0);
        let expected = RadialExpr::quotient(
            RPoly::from_polynomial(Polynomial::parse("x", &["x", "y"]).unwrap()),
            1,
            &[],
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn quotient_rule_on_structured_denominator() {
        // ∂_0 (1/r) = -x/r³; evaluate both at a float point.
        let n = 2;
        let one = RPoly::from_polynomial(Polynomial::constant(n, Rational::from_integer(1.into())));
        let inv_r = RadialExpr::quotient(one, 1, &[]);
        let d = inv_r.derivative(0);
        let p = [3.0, 4.0];
        let expected = -3.0 / 125.0;
        assert!((d.eval_f64(&p) - expected).abs() < 1e-12);
    }

    #[test]
    fn cross_multiplication_equality() {
        // x/r equals x·r/r² after reduction.
        let n = 2;
        let x = Polynomial::parse("x", &["x", "y"]).unwrap();
        let a = RadialExpr::quotient(RPoly::from_polynomial(x.clone()), 1, &[]);
        let b = RadialExpr::quotient(
            RPoly {
                even: Polynomial::zero(n),
                odd: x,
            },
            2,
            &[],
        );
        assert_eq!(a, b);
    }

    #[test]
    fn rational_evaluation_on_pythagorean_point() {
        let n = 2;
        let x = Polynomial::parse("x", &["x", "y"]).unwrap();
        let e = RadialExpr::quotient(RPoly::from_polynomial(x), 1, &[]);
        let point = [
            Rational::from_integer(3.into()),
            Rational::from_integer(4.into()),
        ];
        assert_eq!(
            e.eval_rational(&point, &Rational::from_integer(5.into())),
            Rational::new(3.into(), 5.into())
        );
    }
}
