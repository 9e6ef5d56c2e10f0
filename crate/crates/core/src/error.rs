use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} outside the supported range 1..=32")]
    DimensionOutOfRange(usize),
    #[error("scalar outside the field {0}")]
    WrongField(Field),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("matrix is singular")]
    Singular,
    #[error("map is not nilpotent")]
    NotNilpotent,
    #[error("algebra is not nilpotent")]
    AlgebraNotNilpotent,
    #[error("algebra is not filiform")]
    NotFiliform,
    #[error("odd dimension {0}: complex structures need even dimension")]
    OddDimension(usize),
    #[error("J^2 != -Id")]
    NotComplexStructure,
    #[error("J is not an invariant complex structure")]
    NotInvariant,
    #[error("algebra is already defined over Q(i)")]
    AlreadyComplex,
    #[error("subspaces do not form a direct sum of the whole space")]
    NotDirectSum,
    #[error("subspace is not closed under the bracket")]
    NotSubalgebra,
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown catalog key `{0}`")]
    UnknownKey(String),
}

pub type Result<T> = std::result::Result<T, Error>;
