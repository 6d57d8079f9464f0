//! Numeric antisymmetric forms at a single point.

use std::collections::BTreeMap;

/// A k-form with float coefficients over strictly increasing index tuples,
/// the pointwise counterpart of [`super::PolyForm`].
#[derive(Debug, Clone, PartialEq)]
pub struct PointForm {
    num_vars: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, f64>,
}

impl PointForm {
    pub fn zero(num_vars: usize, degree: usize) -> Self {
        PointForm {
            num_vars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(num_vars: usize, value: f64) -> Self {
        let mut out = PointForm::zero(num_vars, 0);
        out.add_term(Vec::new(), value);
        out
    }

    /// 1-form with the given covector coefficients.
    pub fn covector(coeffs: &[f64]) -> Self {
        let mut out = PointForm::zero(coeffs.len(), 1);
        for (i, &c) in coeffs.iter().enumerate() {
            out.add_term(vec![i], c);
        }
        out
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficient(&self, tuple: &[usize]) -> f64 {
        self.coeffs.get(tuple).copied().unwrap_or(0.0)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Vec<usize>, &f64)> {
        self.coeffs.iter()
    }

    pub(crate) fn add_term(&mut self, tuple: Vec<usize>, value: f64) {
        if value == 0.0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(tuple) {
            Entry::Vacant(e) => {
                e.insert(value);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if *e.get() == 0.0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &PointForm) -> PointForm {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (t, v) in &other.coeffs {
            out.add_term(t.clone(), *v);
        }
        out
    }

    pub fn sub(&self, other: &PointForm) -> PointForm {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, factor: f64) -> PointForm {
        PointForm {
            num_vars: self.num_vars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(t, v)| (t.clone(), v * factor)).collect(),
        }
    }

    /// Sup of coefficient magnitudes.
    pub fn norm(&self) -> f64 {
        self.coeffs.values().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Interior product with a vector.
    pub fn contract(&self, v: &[f64]) -> PointForm {
        assert_eq!(v.len(), self.num_vars);
        if self.degree == 0 {
            return PointForm::zero(self.num_vars, 0);
        }
        let mut out = PointForm::zero(self.num_vars, self.degree - 1);
        for (tuple, coeff) in &self.coeffs {
            for (pos, &idx) in tuple.iter().enumerate() {
                if v[idx] == 0.0 {
                    continue;
                }
                let mut rest = tuple.clone();
                rest.remove(pos);
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                out.add_term(rest, sign * coeff * v[idx]);
            }
        }
        out
    }

    /// Wedge product with the shuffle sign.
    pub fn wedge(&self, other: &PointForm) -> PointForm {
        assert_eq!(self.num_vars, other.num_vars);
        let degree = self.degree + other.degree;
        if degree > self.num_vars {
            return PointForm::zero(self.num_vars, self.num_vars);
        }
        let mut out = PointForm::zero(self.num_vars, degree);
        for (ta, ca) in &self.coeffs {
            'next: for (tb, cb) in &other.coeffs {
                let mut tuple = ta.clone();
                let mut sign = 1.0;
                for &j in tb {
                    if tuple.contains(&j) {
                        continue 'next;
                    }
                    let pos = tuple.iter().take_while(|&&t| t < j).count();
                    if (tuple.len() - pos) % 2 == 1 {
                        sign = -sign;
                    }
                    tuple.insert(pos, j);
                }
                out.add_term(tuple, sign * ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covector_wedge_and_contract() {
        let a = PointForm::covector(&[1.0, 0.0]);
        let b = PointForm::covector(&[0.0, 1.0]);
        let ab = a.wedge(&b);
        assert_eq!(ab.coefficient(&[0, 1]), 1.0);
        let back = ab.contract(&[1.0, 0.0]);
        assert_eq!(back.coefficient(&[1]), 1.0);
        let ba = b.wedge(&a);
        assert_eq!(ba.coefficient(&[0, 1]), -1.0);
    }
}
