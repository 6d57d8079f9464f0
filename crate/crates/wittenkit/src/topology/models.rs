//! Product-model comparisons: `h = t·g(x)` on `N×ℝ` against `H(N, N−Z)`,
//! and fiberwise quadratic forms on `N×ℝ^{r+s}` against shifted `H(N)`.

use serde::Serialize;

use super::betti::{absolute_homology, relative_homology, BettiVector};
use super::complex::{build_pair, build_sublevel_pair};
use super::error::TopologyError;
use super::grid::{Axis, GridSpec};

/// Comparison of the direct pair computation on `N×[−T, T]` with
/// `H(N, N−Z)` for `h(x, t) = t·g(x)` on the circle.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem2Report {
    /// `H(N, N−Z)` computed on the circle grid.
    pub n_pair: BettiVector,
    /// Relative homology of `(N×[−T,T], {t·g ≤ −c})`.
    pub product_pair: BettiVector,
    pub equal: bool,
}

/// Computes both sides for `g` on a circle with `circle_cells` vertices,
/// threshold `c`, and the product interval `[−t_extent, t_extent]` with
/// `t_cells` segments. `t_extent` must be large enough that the sublevel
/// region is nonempty wherever `g ≠ 0`.
pub fn theorem2_model(
    g: impl Fn(f64) -> f64,
    circle_cells: usize,
    c: f64,
    t_extent: f64,
    t_cells: usize,
) -> Result<Theorem2Report, TopologyError> {
    if c <= 0.0 {
        return Err(TopologyError::NonPositiveThreshold(c));
    }
    // (a) H(N, N−Z): cells with g ≠ 0 at all vertices. Zero is tested with
    // a tolerance so that grid vertices landing on analytic zeros (where
    // the float value is ~1e-16, not 0.0) are classified correctly.
    let circle = GridSpec::from_axes(vec![Axis::Periodic {
        cells: circle_cells,
    }])?;
    let n_z = build_pair(circle, |x| g(x[0]).abs() > 1e-12)?;
    let n_pair = relative_homology(&n_z)?;

    // (b) the product pair, with t the signed coordinate.
    let product = GridSpec::from_axes(vec![
        Axis::Periodic {
            cells: circle_cells,
        },
        Axis::Interval {
            min: -t_extent,
            max: t_extent,
            cells: t_cells,
        },
    ])?;
    let pair = build_sublevel_pair(|x| x[1] * g(x[0]), c, product)?;
    let product_pair = relative_homology(&pair)?;

    let equal = n_pair.same_ranks(&product_pair);
    Ok(Theorem2Report {
        n_pair,
        product_pair,
        equal,
    })
}

/// Base manifold for the fiberwise-quadratic model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem3Base {
    Circle { cells: usize },
    TwoPoints,
}

/// Comparison of the pair homology of `(N×box^{r+s}, {h ≤ −c})` for
/// `h = Σ u_j² − Σ v_j²` with the shift `H_{i−r}(N)` (orientable case).
#[derive(Debug, Clone, Serialize)]
pub struct Theorem3Report {
    pub pair: BettiVector,
    /// `H(N)` shifted up by the negative rank `r`.
    pub shifted_base: BettiVector,
    pub equal: bool,
}

pub fn theorem3_model(
    base: Theorem3Base,
    rank_minus: usize,
    rank_plus: usize,
    c: f64,
    fiber_radius: f64,
    fiber_cells: usize,
) -> Result<Theorem3Report, TopologyError> {
    if c <= 0.0 {
        return Err(TopologyError::NonPositiveThreshold(c));
    }
    // h(u, v) = Σ u² − Σ v² with the plus block first.
    let h = move |fiber: &[f64]| -> f64 {
        let plus: f64 = fiber[..rank_plus].iter().map(|u| u * u).sum();
        let minus: f64 = fiber[rank_plus..].iter().map(|v| v * v).sum();
        plus - minus
    };
    let fiber_axes = |_: ()| -> Vec<Axis> {
        (0..rank_plus + rank_minus)
            .map(|_| Axis::Interval {
                min: -fiber_radius,
                max: fiber_radius,
                cells: fiber_cells,
            })
            .collect()
    };

    let (pair, base_betti) = match base {
        Theorem3Base::Circle { cells } => {
            let mut axes = vec![Axis::Periodic { cells }];
            axes.extend(fiber_axes(()));
            let grid = GridSpec::from_axes(axes)?;
            let pair = build_sublevel_pair(|x| h(&x[1..]), c, grid)?;
            let betti = relative_homology(&pair)?;
            let circle = GridSpec::from_axes(vec![Axis::Periodic { cells }])?;
            let all = build_pair(circle, |_| true)?;
            (betti, absolute_homology(&all)?)
        }
        Theorem3Base::TwoPoints => {
            // Disjoint union over the two points: Betti numbers add.
            let grid = GridSpec::from_axes(fiber_axes(()))?;
            let pair = build_sublevel_pair(|x| h(x), c, grid)?;
            let single = relative_homology(&pair)?;
            let doubled = BettiVector {
                ranks: single.ranks.iter().map(|r| 2 * r).collect(),
                gf2_ranks: None,
                torsion: single.torsion.clone(),
            };
            let base_betti = BettiVector {
                ranks: vec![2],
                gf2_ranks: None,
                torsion: vec![false],
            };
            (doubled, base_betti)
        }
    };
    let shifted_base = base_betti.shifted(rank_minus);
    let equal = pair.same_ranks(&shifted_base);
    Ok(Theorem3Report {
        pair,
        shifted_base,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_zero_set() {
        // g = cos θ: Z is two points, N−Z two arcs; both sides give (0, 2).
        let report = theorem2_model(|t| t.cos(), 64, 1.0, 4.0, 32).unwrap();
        assert_eq!(report.n_pair.ranks, vec![0, 2]);
        assert!(report.equal, "{report:?}");
        assert_eq!(report.product_pair.ranks, vec![0, 2, 0]);
    }

    #[test]
    fn nowhere_zero_positive() {
        // g = 2 + cos θ has no zeros: everything vanishes.
        let report = theorem2_model(|t| 2.0 + t.cos(), 64, 1.0, 4.0, 32).unwrap();
        assert_eq!(report.n_pair.ranks, vec![0, 0]);
        assert!(report.equal);
        assert_eq!(report.product_pair.ranks, vec![0, 0, 0]);
    }

    #[test]
    fn nowhere_zero_negative() {
        // g ≡ −1: the sublevel region is a single slab; both sides vanish.
        let report = theorem2_model(|_| -1.0, 32, 1.0, 4.0, 32).unwrap();
        assert_eq!(report.n_pair.ranks, vec![0, 0]);
        assert!(report.equal, "{report:?}");
    }

    #[test]
    fn circle_negative_line_bundle() {
        // N = S¹, r = 1, s = 0: pair ranks (0, 1, 1) = shifted circle.
        let report =
            theorem3_model(Theorem3Base::Circle { cells: 32 }, 1, 0, 1.0, 4.0, 32).unwrap();
        assert_eq!(report.pair.ranks, vec![0, 1, 1]);
        assert!(report.equal, "{report:?}");
    }

    #[test]
    fn circle_positive_line_bundle() {
        // r = 0, s = 1: empty sublevel; pair = H(N×I) = H(S¹) = (1, 1).
        let report =
            theorem3_model(Theorem3Base::Circle { cells: 32 }, 0, 1, 1.0, 4.0, 32).unwrap();
        assert_eq!(report.pair.ranks, vec![1, 1, 0]);
        assert!(report.equal, "{report:?}");
    }

    #[test]
    fn two_points_shifted() {
        let report = theorem3_model(Theorem3Base::TwoPoints, 1, 0, 1.0, 4.0, 32).unwrap();
        assert_eq!(report.pair.ranks, vec![0, 2]);
        assert!(report.equal, "{report:?}");
    }
}
