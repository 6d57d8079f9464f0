//! Exact ranks of sparse integer matrices: unit-pivot elimination with a
//! dense Smith-normal-form fallback for the residue block, plus an
//! independent GF(2) column-reduction rank for cross-checking.

use std::collections::{HashMap, HashSet};

/// Column-major sparse integer matrix.
#[derive(Debug, Clone)]
pub struct SparseIntMatrix {
    pub rows: usize,
    pub cols: Vec<Vec<(u32, i64)>>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn push(&mut self, row: u32, col: usize, value: i64) {
        if value != 0 {
            self.cols[col].push((row, value));
        }
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }
}

/// Rank over ℚ and the elementary divisors larger than one.
///
/// Pivots of absolute value one are eliminated first (they change no other
/// divisor); whatever remains is reduced by a dense Smith normal form. For
/// cubical boundary matrices the residue block is almost always empty.
pub fn integer_rank_and_divisors(matrix: &SparseIntMatrix) -> (usize, Vec<i128>) {
    let mut cols: Vec<HashMap<u32, i128>> = matrix
        .cols
        .iter()
        .map(|c| {
            let mut m = HashMap::with_capacity(c.len());
            for &(r, v) in c {
                *m.entry(r).or_insert(0) += v as i128;
            }
            m.retain(|_, v| *v != 0);
            m
        })
        .collect();
    // row -> set of columns with a nonzero entry in that row
    let mut row_cols: HashMap<u32, HashSet<u32>> = HashMap::new();
    for (j, col) in cols.iter().enumerate() {
        for (&r, _) in col.iter() {
            row_cols.entry(r).or_default().insert(j as u32);
        }
    }

    let mut rank = 0usize;
    let mut alive: Vec<bool> = cols.iter().map(|c| !c.is_empty()).collect();

    // Shortest-column-first elimination through a lazy min-heap; stale
    // entries are skipped, and columns modified during elimination are
    // re-pushed. Columns without a unit entry fall through to the dense
    // block.
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = cols
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty())
        .map(|(j, c)| Reverse((c.len(), j)))
        .collect();
    loop {
        let pivot_col = loop {
            let Some(Reverse((len, j))) = heap.pop() else {
                break usize::MAX;
            };
            if !alive[j] || cols[j].is_empty() || cols[j].len() != len {
                continue;
            }
            if cols[j].values().any(|v| v.abs() == 1) {
                break j;
            }
        };
        if pivot_col == usize::MAX {
            break;
        }
        // choose the unit entry whose row touches fewest columns
        let (&pivot_row, &pivot_val) = cols[pivot_col]
            .iter()
            .filter(|(_, v)| v.abs() == 1)
            .min_by_key(|(r, _)| row_cols.get(r).map_or(0, |s| s.len()))
            .expect("unit entry present");

        rank += 1;
        alive[pivot_col] = false;
        let pivot_entries: Vec<(u32, i128)> =
            cols[pivot_col].iter().map(|(&r, &v)| (r, v)).collect();

        let touching: Vec<u32> = row_cols
            .get(&pivot_row)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default();
        for j in touching {
            let j = j as usize;
            if j == pivot_col || !alive[j] {
                continue;
            }
            let Some(&factor) = cols[j].get(&pivot_row) else {
                continue;
            };
            // col_j -= (factor / pivot_val) * pivot_col ; pivot_val = ±1
            let q = factor * pivot_val; // factor / pivot_val since |pivot_val| = 1
            for &(r, v) in &pivot_entries {
                let entry = cols[j].entry(r).or_insert(0);
                *entry -= q * v;
                if *entry == 0 {
                    cols[j].remove(&r);
                    if let Some(s) = row_cols.get_mut(&r) {
                        s.remove(&(j as u32));
                    }
                } else if *entry == -q * v {
                    // entry was newly created
                    row_cols.entry(r).or_default().insert(j as u32);
                }
            }
            if !cols[j].is_empty() {
                heap.push(Reverse((cols[j].len(), j)));
            }
        }
        // retire the pivot row and column
        for &(r, _) in &pivot_entries {
            if let Some(s) = row_cols.get_mut(&r) {
                s.remove(&(pivot_col as u32));
            }
        }
        cols[pivot_col].clear();
        if let Some(s) = row_cols.remove(&pivot_row) {
            for j in s {
                cols[j as usize].remove(&pivot_row);
            }
        }
    }

    // Dense Smith normal form on whatever survives.
    let mut row_index: HashMap<u32, usize> = HashMap::new();
    let live_cols: Vec<usize> = (0..cols.len())
        .filter(|&j| alive[j] && !cols[j].is_empty())
        .collect();
    for &j in &live_cols {
        for &r in cols[j].keys() {
            let next = row_index.len();
            row_index.entry(r).or_insert(next);
        }
    }
    let nrows = row_index.len();
    let mut dense: Vec<Vec<i128>> = Vec::with_capacity(live_cols.len());
    for &j in &live_cols {
        let mut column = vec![0i128; nrows];
        for (&r, &v) in cols[j].iter() {
            column[row_index[&r]] = v;
        }
        dense.push(column);
    }
    let (extra_rank, divisors) = dense_snf(&mut dense, nrows);
    (rank + extra_rank, divisors)
}

/// Textbook Smith normal form on a small dense block (column-major);
/// returns the rank and the diagonal entries larger than one.
fn dense_snf(cols: &mut [Vec<i128>], nrows: usize) -> (usize, Vec<i128>) {
    let ncols = cols.len();
    let mut rank = 0;
    let mut divisors = Vec::new();
    let mut top = 0usize;
    while top < nrows && top < ncols {
        // find the nonzero entry of minimal magnitude in the working block
        let mut pivot: Option<(usize, usize, i128)> = None;
        for (j, col) in cols.iter().enumerate().skip(top) {
            for (i, &v) in col.iter().enumerate().skip(top) {
                if v != 0 && pivot.is_none_or(|(_, _, pv)| v.abs() < pv.abs()) {
                    pivot = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        cols.swap(top, pj);
        for col in cols.iter_mut().skip(top) {
            col.swap(top, pi);
        }
        // clear the pivot row and column by Euclidean steps
        let mut again = true;
        while again {
            again = false;
            let pv = cols[top][top];
            for j in (top + 1)..ncols {
                let q = cols[j][top].div_euclid(pv);
                if q != 0 {
                    for i in 0..nrows {
                        let delta = q * cols[top][i];
                        cols[j][i] -= delta;
                    }
                }
            }
            for i in (top + 1)..nrows {
                let q = cols[top][i].div_euclid(pv);
                if q != 0 {
                    for col in cols.iter_mut().skip(top) {
                        let delta = q * col[top];
                        col[i] -= delta;
                    }
                }
            }
            // any remainder left in row/column means another pass
            if cols
                .iter()
                .skip(top + 1)
                .any(|c| c[top] != 0)
                || ((top + 1)..nrows).any(|i| cols[top][i] != 0)
            {
                // move a smaller remainder into the pivot slot
                let mut best: Option<(usize, usize, i128)> = None;
                for (j, col) in cols.iter().enumerate().skip(top) {
                    for (i, &v) in col.iter().enumerate().skip(top) {
                        if v != 0 && best.is_none_or(|(_, _, bv)| v.abs() < bv.abs()) {
                            best = Some((i, j, v));
                        }
                    }
                }
                if let Some((bi, bj, _)) = best {
                    cols.swap(top, bj);
                    for col in cols.iter_mut().skip(top) {
                        col.swap(top, bi);
                    }
                }
                again = true;
            }
        }
        let d = cols[top][top].abs();
        if d != 0 {
            rank += 1;
            if d > 1 {
                divisors.push(d);
            }
        }
        top += 1;
    }
    (rank, divisors)
}

/// Rank over GF(2) by the standard low-pivot column reduction; a fully
/// independent code path from the integer elimination.
pub fn gf2_rank(matrix: &SparseIntMatrix) -> usize {
    let mut pivot_of_low: HashMap<u32, usize> = HashMap::new();
    let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(matrix.cols.len());
    let mut rank = 0;
    for col in &matrix.cols {
        let mut current: Vec<u32> = {
            let mut counts: HashMap<u32, usize> = HashMap::new();
            for &(r, v) in col {
                if v % 2 != 0 {
                    *counts.entry(r).or_insert(0) += 1;
                }
            }
            let mut rows: Vec<u32> = counts
                .into_iter()
                .filter(|(_, c)| c % 2 == 1)
                .map(|(r, _)| r)
                .collect();
            rows.sort_unstable();
            rows
        };
        while let Some(&low) = current.last() {
            match pivot_of_low.get(&low) {
                None => break,
                Some(&other) => {
                    current = xor_sorted(&current, &reduced[other]);
                }
            }
        }
        if let Some(&low) = current.last() {
            pivot_of_low.insert(low, reduced.len());
            rank += 1;
        }
        reduced.push(current);
    }
    rank
}

fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_dense(rows: usize, data: &[&[i64]]) -> SparseIntMatrix {
        let mut m = SparseIntMatrix::new(rows, data.len());
        for (j, col) in data.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.push(i as u32, j, v);
            }
        }
        m
    }

    #[test]
    fn identity_rank() {
        let m = from_dense(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let (rank, div) = integer_rank_and_divisors(&m);
        assert_eq!(rank, 3);
        assert!(div.is_empty());
        assert_eq!(gf2_rank(&m), 3);
    }

    #[test]
    fn rank_deficient() {
        let m = from_dense(2, &[&[1, 1], &[2, 2], &[3, 3]]);
        let (rank, div) = integer_rank_and_divisors(&m);
        assert_eq!(rank, 1);
        assert!(div.is_empty());
        assert_eq!(gf2_rank(&m), 1);
    }

    #[test]
    fn torsion_divisor_detected() {
        // diag(1, 2): divisor 2 (a GF(2) rank drop flags it too).
        let m = from_dense(2, &[&[1, 0], &[0, 2]]);
        let (rank, div) = integer_rank_and_divisors(&m);
        assert_eq!(rank, 2);
        assert_eq!(div, vec![2]);
        assert_eq!(gf2_rank(&m), 1);
    }

    #[test]
    fn projective_plane_style_block() {
        // A 2x2 block without units: [[2, 0], [0, 3]] has divisors 2 and 3.
        let m = from_dense(2, &[&[2, 0], &[0, 3]]);
        let (rank, div) = integer_rank_and_divisors(&m);
        assert_eq!(rank, 2);
        assert_eq!(div, vec![2, 3]);
    }

    #[test]
    fn mixed_elimination() {
        let m = from_dense(
            3,
            &[&[1, 2, 3], &[0, 4, 5], &[1, 2, 3], &[2, 4, 6]],
        );
        let (rank, _) = integer_rank_and_divisors(&m);
        assert_eq!(rank, 2);
        assert_eq!(gf2_rank(&m), 2);
    }

    #[test]
    fn empty_matrix() {
        let m = SparseIntMatrix::new(0, 0);
        assert_eq!(integer_rank_and_divisors(&m), (0, vec![]));
        assert_eq!(gf2_rank(&m), 0);
    }
}
