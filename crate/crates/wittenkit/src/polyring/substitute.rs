//! The odd-power substitution `x_i = y_i^k + y_i` and weighted-degree gap
//! checks on its output.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::error::PolyError;
use super::poly::Polynomial;
use super::weights::WeightSystem;

/// Exact composition `p(y_1^k + y_1, …, y_n^k + y_n)` for odd `k ≥ 1`.
///
/// The substitution is a diffeomorphism of the real line in each variable
/// precisely because `k` is odd; even powers are rejected.
pub fn substitute_phi(p: &Polynomial, k: u32) -> Result<Polynomial, PolyError> {
    if k % 2 == 0 {
        return Err(PolyError::EvenSubstitutionPower(k));
    }
    let n = p.num_vars();
    let mut out = Polynomial::zero(n);
    for (exp, coeff) in p.terms() {
        // Π_i (y_i^k + y_i)^{m_i}, expanded by binomials: the choice j_i
        // out of m_i top factors contributes y_i^{k·j_i + (m_i − j_i)}.
        let mut acc = Polynomial::constant(n, coeff.clone());
        for (i, &m) in exp.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let mut factor = Polynomial::zero(n);
            let mut binom = BigInt::from(1);
            for j in 0..=m {
                let mut e = vec![0u32; n];
                e[i] = k * j + (m - j);
                factor.add_term(e, BigRational::from_integer(binom.clone()));
                // C(m, j+1) = C(m, j) · (m − j) / (j + 1)
                binom = binom * BigInt::from(m - j) / BigInt::from(j + 1);
            }
            acc = &acc * &factor;
        }
        out = &out + &acc;
    }
    Ok(out)
}

/// Result of scanning for terms with weighted degree strictly inside
/// `(gap_low, degree)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapCheck {
    pub pass: bool,
    /// Offending exponent vectors with their weighted degrees.
    pub offenders: Vec<(Vec<u32>, u64)>,
}

/// Passes iff no term of `p` has weighted degree in the open interval
/// `(gap_low, degree)`.
pub fn gap_check(
    p: &Polynomial,
    w: &WeightSystem,
    degree: u64,
    gap_low: u64,
) -> Result<GapCheck, PolyError> {
    if gap_low >= degree {
        return Err(PolyError::InvalidGap { gap_low, degree });
    }
    let mut offenders = Vec::new();
    for (exp, _) in p.terms() {
        let d = w.degree_of(exp);
        if gap_low < d && d < degree {
            offenders.push((exp.clone(), d));
        }
    }
    Ok(GapCheck {
        pass: offenders.is_empty(),
        offenders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::WeightedDegree;

    fn p1(src: &str) -> Polynomial {
        Polynomial::parse(src, &["x"]).unwrap()
    }

    #[test]
    fn square_substitution() {
        assert_eq!(substitute_phi(&p1("x^2"), 3).unwrap(), p1("x^6 + 2x^4 + x^2"));
    }

    #[test]
    fn linear_substitution() {
        assert_eq!(substitute_phi(&p1("x"), 3).unwrap(), p1("x^3 + x"));
    }

    #[test]
    fn sum_substitution() {
        assert_eq!(
            substitute_phi(&p1("x^2 + x"), 3).unwrap(),
            p1("x^6 + 2x^4 + x^3 + x^2 + x")
        );
    }

    #[test]
    fn even_power_rejected() {
        assert!(matches!(
            substitute_phi(&p1("x"), 2),
            Err(PolyError::EvenSubstitutionPower(2))
        ));
    }

    #[test]
    fn gap_passes_at_width_delta() {
        // Terms of x^6 + 2x^4 + x^2 have degrees {6, 4, 2}; nothing in (5, 6).
        let w = WeightSystem::new(vec![1]).unwrap();
        let p = substitute_phi(&p1("x^2"), 3).unwrap();
        assert!(gap_check(&p, &w, 6, 5).unwrap().pass);
    }

    #[test]
    fn wider_gap_fails_with_offender() {
        let w = WeightSystem::new(vec![1]).unwrap();
        let p = substitute_phi(&p1("x^2"), 3).unwrap();
        let check = gap_check(&p, &w, 6, 3).unwrap();
        assert!(!check.pass);
        assert_eq!(check.offenders, vec![(vec![4], 4)]);
    }

    #[test]
    fn untouched_quartic_gap() {
        let p = Polynomial::parse("x^4 + y^4 + x^2", &["x", "y"]).unwrap();
        let w = WeightSystem::ones(2);
        assert!(gap_check(&p, &w, 4, 3).unwrap().pass);
    }

    #[test]
    fn invalid_gap_rejected() {
        let w = WeightSystem::new(vec![1]).unwrap();
        assert!(matches!(
            gap_check(&p1("x"), &w, 3, 3),
            Err(PolyError::InvalidGap { .. })
        ));
    }

    #[test]
    fn substituted_degree_scales_by_k() {
        let w = WeightSystem::new(vec![1, 2]).unwrap();
        let p = Polynomial::parse("x^3y + x^2", &["x", "y"]).unwrap();
        let d = p.weighted_degree(&w).unwrap().finite().unwrap();
        let sub = substitute_phi(&p, 5).unwrap();
        assert_eq!(
            sub.weighted_degree(&w).unwrap(),
            WeightedDegree::Finite(5 * d)
        );
    }
}
