//! Stabilization scans: Betti vectors across (c, R, m) parameter grids,
//! with plateau detection.

use rayon::prelude::*;
use serde::Serialize;

use super::betti::{relative_homology, BettiVector};
use super::complex::build_sublevel_pair;
use super::error::TopologyError;
use super::grid::GridSpec;

#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    pub c: f64,
    pub radius: f64,
    pub cells: usize,
    pub betti: BettiVector,
}

/// Outcome of plateau detection.
#[derive(Debug, Clone, Serialize)]
pub enum ScanOutcome {
    /// A Betti vector constant on a window spanning at least two
    /// consecutive values of every parameter.
    Stable {
        betti: BettiVector,
        c_window: (usize, usize),
        radius_window: (usize, usize),
        cells_window: (usize, usize),
    },
    /// No plateau; the scan table is returned for inspection and the caller
    /// must not treat any value as converged.
    Unstable,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub entries: Vec<ScanEntry>,
    pub outcome: ScanOutcome,
}

/// Computes the sublevel pair homology on every `(c, R, m)` combination and
/// finds the largest window (by combination count, preferring larger
/// parameters) on which the Betti vector is constant, spanning at least two
/// consecutive values of each parameter list.
pub fn stabilization_scan(
    value: impl Fn(&[f64]) -> f64 + Sync,
    dim: usize,
    cs: &[f64],
    radii: &[f64],
    cells: &[usize],
) -> Result<ScanResult, TopologyError> {
    for (len, name) in [(cs.len(), "c"), (radii.len(), "R"), (cells.len(), "m")] {
        let needed = if name == "m" { 2 } else { 2 };
        if len < needed {
            return Err(TopologyError::ScanTooShort { needed, got: len });
        }
    }
    let combos: Vec<(usize, usize, usize)> = (0..cs.len())
        .flat_map(|i| {
            (0..radii.len()).flat_map(move |j| (0..cells.len()).map(move |k| (i, j, k)))
        })
        .collect();
    let computed: Result<Vec<ScanEntry>, TopologyError> = combos
        .par_iter()
        .map(|&(i, j, k)| {
            let grid = GridSpec::box_grid(dim, radii[j], cells[k])?;
            let pair = build_sublevel_pair(&value, cs[i], grid)?;
            Ok(ScanEntry {
                c: cs[i],
                radius: radii[j],
                cells: cells[k],
                betti: relative_homology(&pair)?,
            })
        })
        .collect();
    let entries = computed?;
    let get = |i: usize, j: usize, k: usize| -> &BettiVector {
        &entries[(i * radii.len() + j) * cells.len() + k].betti
    };

    // Enumerate contiguous windows, largest volume first, later windows
    // preferred on ties.
    let mut best: Option<(usize, (usize, usize), (usize, usize), (usize, usize))> = None;
    for ci in 0..cs.len() {
        for cj in (ci + 1)..cs.len() {
            for ri in 0..radii.len() {
                for rj in (ri + 1)..radii.len() {
                    for mi in 0..cells.len() {
                        for mj in (mi + 1)..cells.len() {
                            let reference = get(ci, ri, mi);
                            let mut constant = true;
                            'win: for i in ci..=cj {
                                for j in ri..=rj {
                                    for k in mi..=mj {
                                        if get(i, j, k) != reference {
                                            constant = false;
                                            break 'win;
                                        }
                                    }
                                }
                            }
                            if constant {
                                let volume =
                                    (cj - ci + 1) * (rj - ri + 1) * (mj - mi + 1);
                                if best.is_none_or(|(bv, ..)| volume >= bv) {
                                    best =
                                        Some((volume, (ci, cj), (ri, rj), (mi, mj)));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let outcome = match best {
        Some((_, cw, rw, mw)) => ScanOutcome::Stable {
            betti: get(cw.0, rw.0, mw.0).clone(),
            c_window: cw,
            radius_window: rw,
            cells_window: mw,
        },
        None => ScanOutcome::Unstable,
    };
    Ok(ScanResult { entries, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbola_plateau() {
        let result = stabilization_scan(
            |x| x[0] * x[0] - x[1] * x[1],
            2,
            &[1.0, 2.0, 4.0],
            &[4.0, 8.0],
            &[32, 64],
        )
        .unwrap();
        match result.outcome {
            ScanOutcome::Stable { betti, .. } => {
                assert_eq!(betti.ranks, vec![0, 1, 0]);
            }
            ScanOutcome::Unstable => panic!("expected a plateau"),
        }
    }

    #[test]
    fn positive_polynomial_plateau_is_trivial() {
        let result = stabilization_scan(
            |x| x[0] * x[0] + x[1] * x[1],
            2,
            &[1.0, 2.0],
            &[4.0, 8.0],
            &[16, 32],
        )
        .unwrap();
        match result.outcome {
            ScanOutcome::Stable { betti, .. } => assert_eq!(betti.ranks, vec![1, 0, 0]),
            ScanOutcome::Unstable => panic!("expected a plateau"),
        }
    }

    #[test]
    fn short_lists_rejected() {
        assert!(matches!(
            stabilization_scan(|_| -1.0, 1, &[1.0], &[2.0, 4.0], &[16, 32]),
            Err(TopologyError::ScanTooShort { .. })
        ));
    }
}
