use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("degenerate grid: axis resolution {got} below the minimum {min}")]
    DegenerateGrid { got: usize, min: usize },

    #[error("grid would allocate {cells} cells, above the configured cap {cap}")]
    TooManyCells { cells: usize, cap: usize },

    #[error("threshold c must be positive, got {0}")]
    NonPositiveThreshold(f64),

    #[error("scan needs at least {needed} values per parameter, got {got}")]
    ScanTooShort { needed: usize, got: usize },

    #[error("long-exact-sequence consistency violated in degree {degree}: pair {pair} vs reduced sublevel {reduced}")]
    LesInconsistent {
        degree: usize,
        pair: usize,
        reduced: usize,
    },

    #[error("rank cross-check failed in degree {degree}: rational {rational} vs GF(2) {gf2} with no torsion flagged")]
    RankCrossCheck {
        degree: usize,
        rational: usize,
        gf2: usize,
    },
}
