use thiserror::Error;

/// Errors raised by tensor construction, invariant evaluation and recovery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed polynomial: {0}")]
    MalformedPolynomial(String),

    #[error("dimension mismatch: expected n = {expected}, got n = {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires n = {required}, got n = {got}")]
    WrongDimension { required: usize, got: usize },

    #[error("matrix is not orthogonal (max |MᵗM - I| = {0:e})")]
    NotOrthogonal(f64),

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("outside the domain H2 != 10 J2 of the partial test")]
    DomainExcluded,

    #[error("tensor is not decoupleable")]
    NotDecoupleable,

    #[error("zero tensor has no distinguished decoupling map")]
    ZeroTensor,

    #[error("covariant matrix has repeated eigenvalues")]
    DegenerateEigenvalues,

    #[error("no real canonical form: {0}")]
    Unsolvable(crate::recover::SolvabilityFailure),

    #[error("no candidate orthogonal map reproduces the target")]
    NoCandidateMatches,

    #[error("value has no exact representation in this field: {0}")]
    NotRepresentable(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
