use thiserror::Error;

use crate::matrix::Position;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("invalid field specification: {0}")]
    InvalidFieldSpec(String),
    #[error("modulus {0:?} is reducible over GF({1})")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("field order {0} exceeds the supported maximum 65536")]
    FieldTooLarge(u64),
    #[error("element index {index} out of range for GF({q})")]
    ElementOutOfRange { index: u32, q: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not in reduced reverse column echelon form")]
    NotEchelon,
    #[error("matrix is not upper triangular with nonzero diagonal")]
    NotBorel,
    #[error("pivot sets differ: {0} vs {1}")]
    PivotSetsDiffer(String, String),
    #[error("witness identity {identity} fails at entry {at}")]
    WitnessIdentityFailed { identity: &'static str, at: Position },

    #[error("not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("subset is not an anti-chain")]
    NotAntiChain,
    #[error("element {0} outside the host poset")]
    UnknownElement(String),
    #[error("poset has {size} elements, above the enumeration bound {bound}")]
    PosetTooLarge { size: usize, bound: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid cell: {0}")]
    InvalidCell(String),
    #[error("points belong to different cells")]
    CellMismatch,
    #[error("size {size} exceeds the configured bound {bound}")]
    SizeBoundExceeded { size: u128, bound: u128 },

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("generalized wreath product fault: {0}")]
    GwpFault(String),
}

pub type Result<T> = std::result::Result<T, Error>;
