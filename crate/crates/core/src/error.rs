use thiserror::Error;

/// Errors raised by factorizations, charts, groupoid operations and leaf tests.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The principal minor for the simple root with this index vanishes.
    #[error("not in the big cell B_-B: principal minor for alpha_{} vanishes", .alpha + 1)]
    NotInBigCell { alpha: usize },

    #[error("point is not in the expected cell: {0}")]
    WrongCell(String),

    #[error("zero parameter at index {index}")]
    ZeroParameter { index: usize },

    #[error("outside the toric chart: phi vanishes at indices {indices:?}")]
    OutsideToricChart { indices: Vec<usize> },

    #[error("point is not in the open leaf (product not in B_-B)")]
    NotInOpenLeaf,

    #[error("not in the zero chart: prefix {prefix} leaves B_-B")]
    NotInZeroChart { prefix: usize },

    #[error("arrows are not composable")]
    NotComposable,

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("cell mismatch: {0}")]
    CellMismatch(String),

    #[error("no rational square root for coordinate {coord}")]
    NoRationalSqrt { coord: usize },

    #[error("not in chart domain: {0}")]
    NotInChartDomain(String),

    #[error("singular matrix")]
    Singular,
}

pub type Result<T> = std::result::Result<T, Error>;
