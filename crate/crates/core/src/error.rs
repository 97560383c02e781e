use thiserror::Error;

use crate::lattice::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("an image needs at least one point")]
    EmptyPointSet,

    #[error("point {point} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        point: Point,
        expected: usize,
        found: usize,
    },

    #[error("duplicate point {0}")]
    DuplicatePoint(Point),

    #[error("invalid adjacency: {0}")]
    InvalidAdjacency(String),

    #[error("index {index} out of range for an image of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: i64, b: i64 },

    #[error("wedge rejected: {0}")]
    InvalidWedge(String),

    #[error("map mismatch: {0}")]
    MapMismatch(String),

    #[error("map is not continuous")]
    NotContinuous,

    #[error("inconsistent constraints: {0}")]
    InconsistentConstraints(String),

    #[error("image is not connected")]
    Disconnected,

    #[error("the given set is not a freezing set")]
    NotFreezing,

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("image too large for this operation: {points} points (limit {limit})")]
    TooLarge { points: usize, limit: usize },

    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
