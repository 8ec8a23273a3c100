use thiserror::Error;

use crate::basis::BasisIndex;

/// Every failure the library reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("term is not representable in the basis: {0}")]
    NotRepresentable(String),
    #[error("basis is not closed under products on axis {axis}")]
    NotClosed { axis: usize },
    #[error("quadrature did not reach tolerance {tolerance:e} within {evaluations} evaluations")]
    QuadratureFailure { tolerance: f64, evaluations: usize },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("non-triangular coupling at mode {index}: {reason}")]
    NonTriangular { index: BasisIndex, reason: String },
    #[error("mode {index} needs unsolved mode {missing}")]
    MissingDependency {
        index: BasisIndex,
        missing: BasisIndex,
    },
    #[error("mode {index}: time-derivative order {order} has no closed-form solver")]
    UnsupportedOrder { index: BasisIndex, order: u32 },
    #[error("mode {index}: leading coefficient vanishes")]
    DegenerateMode { index: BasisIndex },
    #[error("mode {index}: coefficient is not constant in time")]
    NonConstantCoefficient { index: BasisIndex },
    #[error("mode {index}: expression grew past {limit} terms")]
    TermGrowth { index: BasisIndex, limit: usize },
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("no reference formula for `{0}`")]
    UnknownReference(String),
    #[error("grid point outside the evaluation domain: {0}")]
    GridDomain(String),
    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
