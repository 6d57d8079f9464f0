//! Grid geometry: per-axis interval or periodic (circle) discretizations.

use serde::Serialize;

use super::error::TopologyError;

/// One grid axis. Periodic axes parameterize a circle by the angle
/// `θ_i = 2πi/cells`; interval axes cover `[min, max]` with `cells`
/// segments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Axis {
    Interval { min: f64, max: f64, cells: usize },
    Periodic { cells: usize },
}

impl Axis {
    pub fn cells(&self) -> usize {
        match self {
            Axis::Interval { cells, .. } | Axis::Periodic { cells } => *cells,
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Axis::Periodic { .. })
    }

    /// Number of vertex positions along the axis.
    pub fn vertices(&self) -> usize {
        match self {
            Axis::Interval { cells, .. } => cells + 1,
            Axis::Periodic { cells } => *cells,
        }
    }

    /// Number of slot positions (vertices interleaved with edges).
    pub fn slots(&self) -> usize {
        match self {
            Axis::Interval { cells, .. } => 2 * cells + 1,
            Axis::Periodic { cells } => 2 * cells,
        }
    }

    /// Coordinate of vertex `i`.
    pub fn coordinate(&self, i: usize) -> f64 {
        match self {
            Axis::Interval { min, max, cells } => {
                min + (max - min) * i as f64 / *cells as f64
            }
            Axis::Periodic { cells } => {
                2.0 * std::f64::consts::PI * i as f64 / *cells as f64
            }
        }
    }
}

/// A full grid specification: a symmetric box `[-radius, radius]^n` by
/// default, with optional periodic axes for circle and torus factors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub axes: Vec<Axis>,
}

impl GridSpec {
    /// `[-radius, radius]^n` with `cells` segments per axis.
    pub fn box_grid(dim: usize, radius: f64, cells: usize) -> Result<Self, TopologyError> {
        if cells < 8 {
            return Err(TopologyError::DegenerateGrid { got: cells, min: 8 });
        }
        assert!(radius > 0.0, "box radius must be positive");
        Ok(GridSpec {
            axes: (0..dim)
                .map(|_| Axis::Interval {
                    min: -radius,
                    max: radius,
                    cells,
                })
                .collect(),
        })
    }

    pub fn from_axes(axes: Vec<Axis>) -> Result<Self, TopologyError> {
        for axis in &axes {
            if axis.cells() < 8 {
                return Err(TopologyError::DegenerateGrid {
                    got: axis.cells(),
                    min: 8,
                });
            }
        }
        Ok(GridSpec { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Total number of cells of all dimensions.
    pub fn total_cells(&self) -> usize {
        self.axes.iter().map(|a| a.slots()).product()
    }
}
