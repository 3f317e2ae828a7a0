use thiserror::Error;

use crate::field::Field;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. Element indices in messages are
/// 1-based, matching the input formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid class order: {0}")]
    InvalidOverride(String),

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),

    #[error("matrices are constrained by different relations")]
    PatternMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("entry ({0},{1}) lies outside the relation")]
    OffPattern(usize, usize),

    #[error("transitive function domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("function is not transitive: g({0},{1})g({1},{2}) != g({0},{2})")]
    NotTransitive(usize, usize, usize),

    #[error("permutation is not an automorphism of the relation: {0}")]
    NotRelationAutomorphism(String),

    #[error("n = {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: usize, bound: usize },

    #[error("automorphism specs disagree: {0}")]
    Mismatch(String),

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("no size-preserving class bijection: {0}")]
    SizeObstruction(String),

    #[error("block action is not scalar on a matrix unit: {0}")]
    NonScalarBlockAction(String),

    #[error("relation is not symmetric, so the algebra is not semisimple")]
    NotSemisimple,

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("parse error: {0}")]
    Parse(String),
}
