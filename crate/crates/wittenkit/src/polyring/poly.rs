//! Sparse exponent-vector polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::error::PolyError;

/// Exact rational coefficient type used throughout the crate.
pub type Rational = BigRational;

/// A sparse multivariate polynomial over the rationals.
///
/// Terms are keyed by exponent vectors of fixed length `num_vars`; zero
/// coefficients are never stored, and the `BTreeMap` key order makes the
/// representation canonical: equal polynomials serialize identically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

/// Binary ring operation selector for [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
}

/// Applies a ring operation after checking that the operands share a
/// variable count.
pub fn arith(p: &Polynomial, q: &Polynomial, op: BinaryOp) -> Result<Polynomial, PolyError> {
    if p.num_vars != q.num_vars {
        return Err(PolyError::DimensionMismatch {
            left: p.num_vars,
            right: q.num_vars,
        });
    }
    Ok(match op {
        BinaryOp::Add => p + q,
        BinaryOp::Sub => p - q,
        BinaryOp::Mul => p * q,
    })
}

impl Polynomial {
    /// The zero polynomial in `num_vars` variables.
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    /// A constant polynomial.
    pub fn constant(num_vars: usize, value: Rational) -> Self {
        let mut p = Polynomial::zero(num_vars);
        if !value.is_zero() {
            p.terms.insert(vec![0; num_vars], value);
        }
        p
    }

    pub fn constant_i64(num_vars: usize, value: i64) -> Self {
        Polynomial::constant(num_vars, Rational::from_integer(BigInt::from(value)))
    }

    /// The monomial `x_index`.
    pub fn variable(num_vars: usize, index: usize) -> Result<Self, PolyError> {
        if index >= num_vars {
            return Err(PolyError::IndexOutOfRange { index, num_vars });
        }
        let mut exp = vec![0; num_vars];
        exp[index] = 1;
        Ok(Polynomial::monomial(exp, Rational::one()))
    }

    /// A single term `coeff · x^exp`.
    pub fn monomial(exp: Vec<u32>, coeff: Rational) -> Self {
        let num_vars = exp.len();
        let mut p = Polynomial::zero(num_vars);
        if !coeff.is_zero() {
            p.terms.insert(exp, coeff);
        }
        p
    }

    /// Builds a polynomial from integer-coefficient terms; zero coefficients
    /// and repeated exponents are merged away.
    pub fn from_terms(num_vars: usize, terms: &[(Vec<u32>, i64)]) -> Self {
        let mut p = Polynomial::zero(num_vars);
        for (exp, c) in terms {
            assert_eq!(exp.len(), num_vars, "exponent length mismatch");
            p.add_term(exp.clone(), Rational::from_integer(BigInt::from(*c)));
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms in canonical (lexicographic exponent) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.num_vars])
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Maximum exponent of variable `i` over all terms.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, exp: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Exact partial derivative with respect to variable `index`.
    pub fn partial_derivative(&self, index: usize) -> Result<Polynomial, PolyError> {
        if index >= self.num_vars {
            return Err(PolyError::IndexOutOfRange {
                index,
                num_vars: self.num_vars,
            });
        }
        let mut out = Polynomial::zero(self.num_vars);
        for (exp, coeff) in &self.terms {
            let e = exp[index];
            if e == 0 {
                continue;
            }
            let mut new_exp = exp.clone();
            new_exp[index] = e - 1;
            out.add_term(new_exp, coeff * Rational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    /// Gradient as a vector of polynomials.
    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.num_vars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.num_vars {
            return Err(PolyError::PointDimension {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        let powers = power_table(point, &self.max_exponents(), Rational::one(), |a, b| a * b);
        let mut acc = Rational::zero();
        for (exp, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    term *= &powers[i][e as usize];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Float evaluation; rounding follows IEEE 754 double arithmetic with
    /// per-variable power tables (error is a few ulps per term).
    pub fn eval_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        if point.len() != self.num_vars {
            return Err(PolyError::PointDimension {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        let powers = power_table(point, &self.max_exponents(), 1.0f64, |a, b| a * b);
        let mut acc = 0.0;
        for (exp, coeff) in &self.terms {
            let mut term = rational_to_f64(coeff);
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    term *= powers[i][e as usize];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    fn max_exponents(&self) -> Vec<u32> {
        let mut max = vec![0u32; self.num_vars];
        for exp in self.terms.keys() {
            for (m, &e) in max.iter_mut().zip(exp.iter()) {
                *m = (*m).max(e);
            }
        }
        max
    }

    /// Scales every coefficient.
    pub fn scale(&self, factor: &Rational) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(self.num_vars);
        }
        Polynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * factor))
                .collect(),
        }
    }

    /// Substitutes `x_index ↦ q` where `q` is a polynomial in the same
    /// variables. Exact composition by power expansion.
    pub fn substitute(&self, index: usize, q: &Polynomial) -> Result<Polynomial, PolyError> {
        if index >= self.num_vars {
            return Err(PolyError::IndexOutOfRange {
                index,
                num_vars: self.num_vars,
            });
        }
        if q.num_vars != self.num_vars {
            return Err(PolyError::DimensionMismatch {
                left: self.num_vars,
                right: q.num_vars,
            });
        }
        let max_e = self.degree_in(index) as usize;
        let mut q_powers: Vec<Polynomial> = Vec::with_capacity(max_e + 1);
        q_powers.push(Polynomial::constant(self.num_vars, Rational::one()));
        for k in 1..=max_e {
            let next = &q_powers[k - 1] * q;
            q_powers.push(next);
        }
        let mut out = Polynomial::zero(self.num_vars);
        for (exp, coeff) in &self.terms {
            let mut rest = exp.clone();
            let e = rest[index];
            rest[index] = 0;
            let base = Polynomial::monomial(rest, coeff.clone());
            out = &out + &(&base * &q_powers[e as usize]);
        }
        Ok(out)
    }

    /// Lex-leading term (largest exponent vector).
    pub fn leading_term_lex(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.last_key_value()
    }

    /// Exact multivariate division: returns `Some(q)` with `self = q·divisor`
    /// or `None` when the division does not come out exactly.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert_eq!(self.num_vars, divisor.num_vars, "variable count mismatch");
        let (dexp, dcoeff) = divisor.leading_term_lex()?;
        let dexp = dexp.clone();
        let dcoeff = dcoeff.clone();
        let mut quot = Polynomial::zero(self.num_vars);
        let mut rem = self.clone();
        while let Some((rexp, rcoeff)) = rem.leading_term_lex() {
            if !rexp.iter().zip(dexp.iter()).all(|(a, b)| a >= b) {
                return None;
            }
            let exp: Vec<u32> = rexp.iter().zip(dexp.iter()).map(|(a, b)| a - b).collect();
            let t = Polynomial::monomial(exp, rcoeff / &dcoeff);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Parses expressions like `x^3 - 3*x*y^2 + 1/2*x + 1` over the listed
    /// variable names. Supports `+ - * ^`, parentheses, and rational
    /// literals `p/q`.
    pub fn parse(src: &str, vars: &[&str]) -> Result<Polynomial, PolyError> {
        Parser::new(src, vars)?.parse()
    }

    /// Renders the polynomial with the given variable names.
    pub fn render(&self, vars: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (exp, coeff) in &self.terms {
            let neg = coeff.is_negative();
            let mag = coeff.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let is_const = exp.iter().all(|&e| e == 0);
            if !mag.is_one() || is_const {
                out.push_str(&mag.to_string());
                if !is_const {
                    out.push('*');
                }
            }
            let mut first = true;
            for (i, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    out.push('*');
                }
                first = false;
                out.push_str(vars.get(i).copied().unwrap_or("?"));
                if e > 1 {
                    out.push_str(&format!("^{e}"));
                }
            }
        }
        out
    }
}

fn power_table<T: Clone>(point: &[T], max: &[u32], one: T, mul: impl Fn(&T, &T) -> T) -> Vec<Vec<T>> {
    point
        .iter()
        .zip(max.iter())
        .map(|(x, &m)| {
            let mut row = Vec::with_capacity(m as usize + 1);
            row.push(one.clone());
            for k in 1..=m as usize {
                row.push(mul(&row[k - 1], x));
            }
            row
        })
        .collect()
}

/// Rational-to-f64 conversion that survives numerators outside the f64
/// integer range by falling back to a quotient of f64 approximations.
pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (exp, coeff) in &rhs.terms {
            out.add_term(exp.clone(), coeff.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (exp, coeff) in &rhs.terms {
            out.add_term(exp.clone(), -coeff.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = Polynomial::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp: Vec<u32> = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                out.add_term(exp, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z", "u", "v", "w"];
        write!(f, "{}", self.render(&names[..self.num_vars.min(names.len())]))
    }
}

// Minimal recursive-descent parser, used by tests and fixtures.
struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn new(src: &str, vars: &'a [&'a str]) -> Result<Self, PolyError> {
        Ok(Parser {
            chars: src.chars().collect(),
            pos: 0,
            vars,
        })
    }

    fn parse(&mut self) -> Result<Polynomial, PolyError> {
        let p = self.expr()?;
        self.skip_ws();
        if self.pos < self.chars.len() {
            return Err(PolyError::Parse(format!(
                "unexpected character '{}' at {}",
                self.chars[self.pos], self.pos
            )));
        }
        Ok(p)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                // implicit multiplication: `3x`, `x y`, `2(x+1)`
                Some(c) if c.is_alphabetic() || c == '(' || c.is_ascii_digit() => {
                    acc = &acc * &self.power()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let e: u32 = digits
                .parse()
                .map_err(|_| PolyError::Parse("bad exponent".into()))?;
            let mut acc = Polynomial::constant(base.num_vars, Rational::one());
            for _ in 0..e {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(PolyError::Parse("expected ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '/')
                {
                    self.pos += 1;
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                let value = Rational::from_str(&lit)
                    .map_err(|e| PolyError::Parse(format!("bad literal '{lit}': {e}")))?;
                Ok(Polynomial::constant(self.vars.len(), value))
            }
            Some(c) if c.is_alphabetic() => {
                // Longest declared variable name matching at this position,
                // so `xy` means x·y when the variables are x and y.
                let rest: String = self.chars[self.pos..].iter().collect();
                let mut best: Option<usize> = None;
                for (i, name) in self.vars.iter().enumerate() {
                    if rest.starts_with(name)
                        && best.is_none_or(|b| self.vars[b].len() < name.len())
                    {
                        best = Some(i);
                    }
                }
                let index = best
                    .ok_or_else(|| PolyError::Parse(format!("unknown variable at '{c}'")))?;
                self.pos += self.vars[index].chars().count();
                Polynomial::variable(self.vars.len(), index)
            }
            other => Err(PolyError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
