use thiserror::Error;

/// Errors raised by malformed input or violated structural preconditions.
///
/// Pure algebraic operations (normal forms, invariants) are total and never
/// return these; they appear at construction boundaries.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("homomorphism is not well defined: relator column {column} maps outside the target relations")]
    IllDefinedHom { column: usize },
    #[error("maps are not composable at position {0}")]
    NotComposable(usize),
    #[error("ambient group has torsion; purification needs a free ambient group")]
    TorsionAmbient,
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("vertex map is not simplicial: image of {0:?} is not a simplex")]
    NotSimplicial(Vec<usize>),
    #[error("cover element {label} is not contained in any coarse element")]
    NotRefinement { label: String },
    #[error("diagram is not functorial between {lower} and {upper}")]
    NotFunctorial { lower: String, upper: String },
    #[error("bisystem square at ({alpha}, {beta}) does not commute")]
    NotCommutative { alpha: usize, beta: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
