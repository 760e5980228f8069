use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degenerate direction")]
    DegenerateDirection,

    #[error("grid extents must all be positive")]
    InvalidGrid,

    #[error("direction set is empty")]
    EmptyDirections,

    #[error("direction {index} is not normalized")]
    NotNormalized { index: usize },

    #[error("direction {index} is not primitive")]
    NotPrimitive { index: usize },

    #[error("{count} directions exceed the exact enumeration limit of {limit}")]
    TooManyDirections { count: usize, limit: usize },

    #[error("value array has length {got}, grid has {expected} points")]
    LengthMismatch { expected: usize, got: usize },

    #[error("border fan direction {index} is not in the quadrant a > 0, b < 0")]
    FanQuadrant { index: usize },

    #[error("border fan directions are out of order at position {index}")]
    UnorderedFan { index: usize },

    #[error("point ({p}, {q}) lies outside the fan")]
    OutsideFan { p: i64, q: i64 },

    #[error("integer overflow in weight scaling")]
    Overflow,

    #[error("line-sum table does not match the grid: {0}")]
    TableMismatch(String),

    #[error("inconsistent line sums: direction {direction}, line through {base:?}")]
    Inconsistent { direction: usize, base: Vec<usize> },

    #[error("free-choice policy: {0}")]
    Policy(String),

    #[error("reconstruction stalled with {unknown} unknown points, first at {first:?}")]
    Stall { unknown: usize, first: Vec<usize> },
}
