use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("entries over different fields")]
    FieldMismatch,
    #[error("shape mismatch: {0}")]
    ShapeError(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("path enumeration did not stabilise within length {bound} ({paths} paths enumerated)")]
    InfiniteDimensional { bound: usize, paths: usize },

    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("isomorphism search exhausted without a verdict ({0})")]
    SearchExhausted(String),
    #[error("could not certify indecomposability of a summand with dimension vector {0:?}")]
    DecompositionInconclusive(Vec<usize>),
    #[error("catalog cap exceeded: {0}")]
    CatalogCapExceeded(String),

    #[error("object with dimension vector {0:?} lies outside the ambient subcategory")]
    ObjectOutsideSubcategory(Vec<usize>),
    #[error("final d-kernel term with dimension vector {0:?} is not in add(T)")]
    NotInSubcategory(Vec<usize>),
    #[error("right approximation of the object with dimension vector {0:?} is not monic")]
    ApproximationNotMonic(Vec<usize>),
    #[error("sequence is not an admissible d-exact sequence")]
    NotAdmissible,
    #[error("resolution does not terminate within {steps} steps; offending syzygy has dimension vector {syzygy:?}")]
    ResolutionTooLong { steps: usize, syzygy: Vec<usize> },
    #[error("right approximation of the object with dimension vector {0:?} is not surjective")]
    NotGenerating(Vec<usize>),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("lifting system is inconsistent: {0}")]
    LiftFailed(String),
    #[error("summand with dimension vector {0:?} is not among the generators")]
    UnknownSummand(Vec<usize>),
    #[error("could not certify the isomorphism of presented functors")]
    InconclusiveIso,
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for the failure modes that mean "the search gave up", as opposed to
    /// a definite mathematical answer.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::SearchExhausted(_) | Error::DecompositionInconclusive(_) | Error::InconclusiveIso
        )
    }
}
