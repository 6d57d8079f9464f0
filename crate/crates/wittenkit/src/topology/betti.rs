//! Relative and absolute homology ranks of cubical pairs.

use serde::Serialize;

use super::complex::CubicalPair;
use super::error::TopologyError;
use super::snf::{gf2_rank, integer_rank_and_divisors, SparseIntMatrix};

/// Homology ranks over ℚ with a GF(2) cross-check and torsion flags from
/// the elementary divisors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub ranks: Vec<usize>,
    pub gf2_ranks: Option<Vec<usize>>,
    pub torsion: Vec<bool>,
}

impl BettiVector {
    /// Compares ranks, ignoring trailing zeros.
    pub fn same_ranks(&self, other: &BettiVector) -> bool {
        let len = self.ranks.len().max(other.ranks.len());
        (0..len).all(|k| {
            self.ranks.get(k).copied().unwrap_or(0) == other.ranks.get(k).copied().unwrap_or(0)
        })
    }

    pub fn shifted(&self, by: usize) -> BettiVector {
        let mut ranks = vec![0; by];
        ranks.extend_from_slice(&self.ranks);
        let mut torsion = vec![false; by];
        torsion.extend_from_slice(&self.torsion);
        BettiVector {
            ranks,
            gf2_ranks: None,
            torsion,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

enum Mode {
    /// Chains on cells outside the subcomplex; faces inside it are dropped.
    Relative,
    /// Chains on the subcomplex itself.
    SubAbsolute,
}

fn boundary_matrices(pair: &CubicalPair, mode: &Mode) -> Vec<SparseIntMatrix> {
    let complex = &pair.complex;
    let n = complex.dim();
    let keep = |id: u64| -> bool {
        match mode {
            Mode::Relative => !pair.sub[id as usize],
            Mode::SubAbsolute => pair.sub[id as usize],
        }
    };
    // ordinals among kept cells, per dimension
    let mut kept_ordinals: Vec<Vec<u32>> = Vec::with_capacity(n + 1);
    let mut kept_counts = vec![0usize; n + 1];
    for dim in 0..=n {
        let mut ords = vec![u32::MAX; complex.cells(dim).len()];
        let mut next = 0u32;
        for (i, &id) in complex.cells(dim).iter().enumerate() {
            if keep(id) {
                ords[i] = next;
                next += 1;
            }
        }
        kept_counts[dim] = next as usize;
        kept_ordinals.push(ords);
    }
    let mut matrices = Vec::with_capacity(n + 1);
    // D_0 is the zero map out of 0-chains
    matrices.push(SparseIntMatrix::new(0, kept_counts[0]));
    for dim in 1..=n {
        let mut m = SparseIntMatrix::new(kept_counts[dim - 1], kept_counts[dim]);
        for &id in complex.cells(dim) {
            if !keep(id) {
                continue;
            }
            let col = kept_ordinals[dim][complex.ordinal(id) as usize] as usize;
            for (face, sign) in complex.boundary(id) {
                if keep(face) {
                    let row = kept_ordinals[dim - 1][complex.ordinal(face) as usize];
                    m.push(row, col, sign);
                }
            }
        }
        matrices.push(m);
    }
    matrices
}

fn homology(pair: &CubicalPair, mode: Mode) -> Result<BettiVector, TopologyError> {
    let n = pair.complex.dim();
    let matrices = boundary_matrices(pair, &mode);
    let mut ranks_q = vec![0usize; n + 2];
    let mut ranks_2 = vec![0usize; n + 2];
    let mut divisors: Vec<Vec<i128>> = vec![Vec::new(); n + 2];
    for (dim, m) in matrices.iter().enumerate() {
        let (rank, divs) = integer_rank_and_divisors(m);
        ranks_q[dim] = rank;
        ranks_2[dim] = gf2_rank(m);
        divisors[dim] = divs;
    }
    let counts: Vec<usize> = (0..=n).map(|d| matrices[d].num_cols()).collect();
    let mut ranks = Vec::with_capacity(n + 1);
    let mut gf2 = Vec::with_capacity(n + 1);
    let mut torsion = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let above = if k + 1 <= n { ranks_q[k + 1] } else { 0 };
        let above2 = if k + 1 <= n { ranks_2[k + 1] } else { 0 };
        ranks.push(counts[k] - ranks_q[k] - above);
        gf2.push(counts[k] - ranks_2[k] - above2);
        // torsion in H_k comes from non-unit divisors of D_{k+1}
        torsion.push(if k + 1 <= n {
            !divisors[k + 1].is_empty()
        } else {
            false
        });
    }
    for k in 0..=n {
        if !torsion[k] && ranks[k] != gf2[k] {
            return Err(TopologyError::RankCrossCheck {
                degree: k,
                rational: ranks[k],
                gf2: gf2[k],
            });
        }
    }
    Ok(BettiVector {
        ranks,
        gf2_ranks: Some(gf2),
        torsion,
    })
}

/// Homology of the pair (ambient, sub) over ℚ via the quotient complex.
pub fn relative_homology(pair: &CubicalPair) -> Result<BettiVector, TopologyError> {
    homology(pair, Mode::Relative)
}

/// Absolute homology of the subcomplex.
pub fn absolute_homology(pair: &CubicalPair) -> Result<BettiVector, TopologyError> {
    homology(pair, Mode::SubAbsolute)
}

/// Sublevel (fiber proxy) Betti numbers with the long-exact-sequence
/// cross-check against the pair.
#[derive(Debug, Clone, Serialize)]
pub struct FiberReport {
    pub sublevel: BettiVector,
    /// Reduced ranks `b̃_k` (degree 0 lowered by one when nonempty).
    pub reduced: Vec<usize>,
    pub pair: BettiVector,
    pub sublevel_empty: bool,
    pub les_consistent: bool,
}

/// Computes reduced Betti numbers of the sublevel set and cross-checks the
/// identity `b_k(pair) = b̃_{k−1}(sublevel)` for `k ≥ 1`, valid because the
/// ambient box is contractible. Violations are reported as errors (they
/// indicate an under-resolved grid).
pub fn fiber_betti(pair: &CubicalPair) -> Result<FiberReport, TopologyError> {
    let pair_betti = relative_homology(pair)?;
    let empty = pair.sub_is_empty();
    if empty {
        let n = pair.complex.dim();
        return Ok(FiberReport {
            sublevel: BettiVector {
                ranks: vec![0; n + 1],
                gf2_ranks: None,
                torsion: vec![false; n + 1],
            },
            reduced: vec![0; n + 1],
            pair: pair_betti,
            sublevel_empty: true,
            les_consistent: true,
        });
    }
    let sublevel = absolute_homology(pair)?;
    let mut reduced = sublevel.ranks.clone();
    reduced[0] = reduced[0].saturating_sub(1);
    // LES over a contractible ambient: H_k(pair) ≅ H̃_{k−1}(sub), and
    // H_0(pair) = 0 for nonempty sub.
    let mut consistent = pair_betti.ranks[0] == 0;
    for k in 1..pair_betti.ranks.len() {
        let expected = reduced.get(k - 1).copied().unwrap_or(0);
        if pair_betti.ranks[k] != expected {
            return Err(TopologyError::LesInconsistent {
                degree: k,
                pair: pair_betti.ranks[k],
                reduced: expected,
            });
        }
    }
    consistent = consistent
        && pair_betti
            .ranks
            .iter()
            .skip(1)
            .zip(reduced.iter())
            .all(|(p, r)| p == r);
    Ok(FiberReport {
        sublevel,
        reduced,
        pair: pair_betti,
        sublevel_empty: false,
        les_consistent: consistent,
    })
}
