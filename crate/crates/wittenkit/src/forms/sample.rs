//! Seeded random polynomials and forms for property tests and residual
//! suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::cyl::RadialExpr;
use crate::polyring::Polynomial;

use super::form::PolyForm;

/// Random sparse polynomial with small integer coefficients.
pub fn random_polynomial(
    rng: &mut impl Rng,
    num_vars: usize,
    max_degree: u32,
    max_terms: usize,
) -> Polynomial {
    let mut p = Polynomial::zero(num_vars);
    let terms = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..terms {
        let exp: Vec<u32> = (0..num_vars)
            .map(|_| rng.gen_range(0..=max_degree))
            .collect();
        let c = rng.gen_range(-4i64..=4);
        if c != 0 {
            p = &p + &Polynomial::monomial(exp, BigRational::from_integer(BigInt::from(c)));
        }
    }
    p
}

/// Random k-form with polynomial coefficients.
pub fn random_form(
    rng: &mut impl Rng,
    num_vars: usize,
    degree: usize,
    max_coeff_degree: u32,
) -> PolyForm {
    assert!(degree <= num_vars);
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    collect_tuples(0, num_vars, degree, &mut Vec::new(), &mut tuples);
    let mut terms = Vec::new();
    for tuple in tuples {
        if rng.gen_bool(0.8) {
            let coeff = random_polynomial(rng, num_vars, max_coeff_degree, 3);
            if !coeff.is_zero() {
                terms.push((tuple, RadialExpr::from_polynomial(coeff)));
            }
        }
    }
    PolyForm::from_terms(num_vars, degree, terms).expect("valid tuples")
}

fn collect_tuples(
    start: usize,
    n: usize,
    k: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if k == 0 {
        out.push(current.clone());
        return;
    }
    for i in start..=n.saturating_sub(k) {
        current.push(i);
        collect_tuples(i + 1, n, k - 1, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::witten_differential;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn d_squared_and_twisted_square_vanish_on_random_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let n = rng.gen_range(2..=3usize);
            let k = rng.gen_range(0..n);
            let form = random_form(&mut rng, n, k, 3);
            assert!(form.exterior_derivative().exterior_derivative().is_zero());
            let h = random_polynomial(&mut rng, n, 3, 4);
            let dh = witten_differential(&form, &h).unwrap();
            let ddh = witten_differential(&dh, &h).unwrap();
            assert!(ddh.is_zero(), "d_h² ≠ 0 for h = {h}, ω = {form}");
        }
    }

    #[test]
    fn leibniz_rule_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..50 {
            let n = 3;
            let ka = rng.gen_range(0..=1usize);
            let kb = rng.gen_range(0..=1usize);
            let a = random_form(&mut rng, n, ka, 2);
            let b = random_form(&mut rng, n, kb, 2);
            let lhs = a.wedge(&b).unwrap().exterior_derivative();
            let mut rhs = a.exterior_derivative().wedge(&b).unwrap();
            let signed = if ka % 2 == 0 {
                a.wedge(&b.exterior_derivative()).unwrap()
            } else {
                a.wedge(&b.exterior_derivative()).unwrap().neg()
            };
            rhs = rhs.add(&signed).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
