//! Cubical complexes on grids, in the interleaved-slot encoding: along
//! each axis, even slots are vertices and odd slots are edges, so a cell
//! is a tuple of slots and its dimension is the number of odd entries.

use super::error::TopologyError;
use super::grid::{Axis, GridSpec};

/// Guard against runaway allocations on oversized grids.
pub const CELL_CAP: usize = 40_000_000;

/// The full cubical complex of a grid.
#[derive(Debug, Clone)]
pub struct CubicalComplex {
    grid: GridSpec,
    strides: Vec<u64>,
    cells_by_dim: Vec<Vec<u64>>,
    /// Dense cell-id → ordinal within its dimension (u32::MAX = unset).
    ordinals: Vec<u32>,
    dims: Vec<u8>,
}

impl CubicalComplex {
    pub fn new(grid: GridSpec) -> Result<Self, TopologyError> {
        let total = grid.total_cells();
        if total > CELL_CAP {
            return Err(TopologyError::TooManyCells {
                cells: total,
                cap: CELL_CAP,
            });
        }
        let n = grid.dim();
        let mut strides = vec![1u64; n];
        for k in 1..n {
            strides[k] = strides[k - 1] * grid.axes[k - 1].slots() as u64;
        }
        let mut cells_by_dim: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
        let mut dims = vec![0u8; total];
        let mut slots = vec![0usize; n];
        for id in 0..total as u64 {
            let dim = slots.iter().filter(|&&s| s % 2 == 1).count();
            dims[id as usize] = dim as u8;
            cells_by_dim[dim].push(id);
            // mixed-radix increment
            for k in 0..n {
                slots[k] += 1;
                if slots[k] < grid.axes[k].slots() {
                    break;
                }
                slots[k] = 0;
            }
        }
        let mut ordinals = vec![u32::MAX; total];
        for cells in &cells_by_dim {
            for (ord, &id) in cells.iter().enumerate() {
                ordinals[id as usize] = ord as u32;
            }
        }
        Ok(CubicalComplex {
            grid,
            strides,
            cells_by_dim,
            ordinals,
            dims,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn total_cells(&self) -> usize {
        self.dims.len()
    }

    pub fn cells(&self, dim: usize) -> &[u64] {
        &self.cells_by_dim[dim]
    }

    pub fn cell_dim(&self, id: u64) -> usize {
        self.dims[id as usize] as usize
    }

    pub fn ordinal(&self, id: u64) -> u32 {
        self.ordinals[id as usize]
    }

    pub fn slots_of(&self, id: u64) -> Vec<usize> {
        let mut rest = id;
        self.grid
            .axes
            .iter()
            .map(|a| {
                let s = (rest % a.slots() as u64) as usize;
                rest /= a.slots() as u64;
                s
            })
            .collect()
    }

    fn id_of(&self, slots: &[usize]) -> u64 {
        slots
            .iter()
            .zip(self.strides.iter())
            .map(|(&s, &st)| s as u64 * st)
            .sum()
    }

    /// Signed boundary faces: for odd slots at axes `e_1 < … < e_d`,
    /// `∂Q = Σ_l (−1)^{l−1}(Q|upper_l − Q|lower_l)`.
    pub fn boundary(&self, id: u64) -> Vec<(u64, i64)> {
        let slots = self.slots_of(id);
        let mut out = Vec::new();
        let mut parity = 0usize;
        for (k, &s) in slots.iter().enumerate() {
            if s % 2 == 0 {
                continue;
            }
            let sign = if parity % 2 == 0 { 1i64 } else { -1i64 };
            parity += 1;
            let axis = &self.grid.axes[k];
            let lower = s - 1;
            let upper = match axis {
                Axis::Interval { .. } => s + 1,
                Axis::Periodic { .. } => (s + 1) % axis.slots(),
            };
            let mut face = slots.clone();
            face[k] = upper;
            out.push((self.id_of(&face), sign));
            face[k] = lower;
            out.push((self.id_of(&face), -sign));
        }
        out
    }

    /// Corner vertex ids of a cell (2^d of them, with repeats possible on
    /// periodic wraps of one-cell axes).
    pub fn corner_vertices(&self, id: u64) -> Vec<u64> {
        let slots = self.slots_of(id);
        let mut corners: Vec<Vec<usize>> = vec![Vec::new()];
        for (k, &s) in slots.iter().enumerate() {
            let choices: Vec<usize> = if s % 2 == 0 {
                vec![s]
            } else {
                let axis = &self.grid.axes[k];
                let upper = match axis {
                    Axis::Interval { .. } => s + 1,
                    Axis::Periodic { .. } => (s + 1) % axis.slots(),
                };
                vec![s - 1, upper]
            };
            let mut next = Vec::with_capacity(corners.len() * choices.len());
            for c in &corners {
                for &choice in &choices {
                    let mut cc = c.clone();
                    cc.push(choice);
                    next.push(cc);
                }
            }
            corners = next;
        }
        corners.into_iter().map(|c| self.id_of(&c)).collect()
    }

    /// Coordinates of a vertex cell.
    pub fn vertex_coordinates(&self, id: u64) -> Vec<f64> {
        self.slots_of(id)
            .iter()
            .zip(self.grid.axes.iter())
            .map(|(&s, a)| {
                debug_assert!(s % 2 == 0, "not a vertex");
                a.coordinate(s / 2)
            })
            .collect()
    }
}

/// Ambient complex plus a face-closed subcomplex membership mask.
#[derive(Debug, Clone)]
pub struct CubicalPair {
    pub complex: CubicalComplex,
    /// Dense id → in-subcomplex flag; closed under taking faces.
    pub sub: Vec<bool>,
}

impl CubicalPair {
    pub fn sub_cell_count(&self, dim: usize) -> usize {
        self.complex
            .cells(dim)
            .iter()
            .filter(|&&id| self.sub[id as usize])
            .count()
    }

    pub fn sub_is_empty(&self) -> bool {
        !self.sub.iter().any(|&b| b)
    }

    /// Relative cell count per dimension.
    pub fn relative_cell_count(&self, dim: usize) -> usize {
        self.complex.cells(dim).len() - self.sub_cell_count(dim)
    }
}

/// Builds a pair from a vertex predicate: a top cell enters the subcomplex
/// iff the predicate holds at all its corner vertices; the subcomplex is
/// then closed under faces, so it is a complex by construction and
/// under-approximates the open region from inside.
pub fn build_pair(
    grid: GridSpec,
    vertex_predicate: impl Fn(&[f64]) -> bool,
) -> Result<CubicalPair, TopologyError> {
    let complex = CubicalComplex::new(grid)?;
    let n = complex.dim();
    let mut vertex_ok = vec![false; complex.total_cells()];
    for &vid in complex.cells(0) {
        let coords = complex.vertex_coordinates(vid);
        vertex_ok[vid as usize] = vertex_predicate(&coords);
    }
    let mut sub = vec![false; complex.total_cells()];
    let mut stack: Vec<u64> = Vec::new();
    for &top in complex.cells(n) {
        if complex
            .corner_vertices(top)
            .iter()
            .all(|&v| vertex_ok[v as usize])
        {
            sub[top as usize] = true;
            stack.push(top);
        }
    }
    while let Some(id) = stack.pop() {
        for (face, _) in complex.boundary(id) {
            if !sub[face as usize] {
                sub[face as usize] = true;
                stack.push(face);
            }
        }
    }
    Ok(CubicalPair { complex, sub })
}

/// Sublevel pair `(grid box, {h ≤ −c})` with the all-vertices inclusion
/// rule.
pub fn build_sublevel_pair(
    value: impl Fn(&[f64]) -> f64,
    c: f64,
    grid: GridSpec,
) -> Result<CubicalPair, TopologyError> {
    if c <= 0.0 {
        return Err(TopologyError::NonPositiveThreshold(c));
    }
    build_pair(grid, |x| value(x) <= -c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_box(dim: usize) -> GridSpec {
        GridSpec::box_grid(dim, 4.0, 8).unwrap()
    }

    #[test]
    fn cell_counts_match_product_formula() {
        let c = CubicalComplex::new(small_box(2)).unwrap();
        assert_eq!(c.cells(0).len(), 9 * 9);
        assert_eq!(c.cells(1).len(), 2 * 8 * 9);
        assert_eq!(c.cells(2).len(), 8 * 8);
    }

    #[test]
    fn boundary_squares_to_zero() {
        use std::collections::HashMap;
        for grid in [
            small_box(2),
            GridSpec::from_axes(vec![
                Axis::Periodic { cells: 8 },
                Axis::Interval {
                    min: -1.0,
                    max: 1.0,
                    cells: 8,
                },
            ])
            .unwrap(),
        ] {
            let c = CubicalComplex::new(grid).unwrap();
            for dim in 2..=c.dim() {
                for &id in c.cells(dim) {
                    let mut acc: HashMap<u64, i64> = HashMap::new();
                    for (face, s1) in c.boundary(id) {
                        for (ff, s2) in c.boundary(face) {
                            *acc.entry(ff).or_insert(0) += s1 * s2;
                        }
                    }
                    assert!(acc.values().all(|&v| v == 0), "∂∂ ≠ 0 for cell {id}");
                }
            }
        }
    }

    #[test]
    fn empty_sublevel_for_positive_function() {
        let pair =
            build_sublevel_pair(|x| x[0] * x[0] + x[1] * x[1], 1.0, small_box(2)).unwrap();
        assert!(pair.sub_is_empty());
    }

    #[test]
    fn full_sublevel_for_constant_negative_function() {
        let pair = build_sublevel_pair(|_| -1.0, 0.5, small_box(2)).unwrap();
        for dim in 0..=2 {
            assert_eq!(pair.relative_cell_count(dim), 0);
        }
    }

    #[test]
    fn subcomplex_is_face_closed() {
        let grid = GridSpec::box_grid(2, 4.0, 32).unwrap();
        let pair = build_sublevel_pair(|x| x[0] * x[0] - x[1] * x[1], 1.0, grid).unwrap();
        assert!(!pair.sub_is_empty());
        let c = &pair.complex;
        for dim in 1..=2 {
            for &id in c.cells(dim) {
                if pair.sub[id as usize] {
                    for (face, _) in c.boundary(id) {
                        assert!(pair.sub[face as usize]);
                    }
                }
            }
        }
    }
}
