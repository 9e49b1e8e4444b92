use thiserror::Error;

/// Errors raised by the algebra, bundle and classification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("determinant is not a unit monomial")]
    NonUnimodular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("rank 0 bundles are not supported")]
    ZeroRank,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("no such structure: {0}")]
    NoSuchStructure(String),
    #[error("missing group element {0}")]
    MissingElement(String),
    #[error("structures are not comparable: {0}")]
    NotComparable(String),
    #[error("operation requires a genuine group structure, not a lift-group structure")]
    NotGenuine,
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("pulled-back cocycle is not block triangular")]
    TriangularityViolation,
    #[error("reference structure is not the block-diagonal part")]
    NotBlockDiagonalPart,
    #[error("residual factorization failed: {0}")]
    FactorizationFailure(String),
    #[error("representation violates group relations: {0}")]
    RelationViolation(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

impl Error {
    /// Stable machine-readable code, used by the CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ConductorMismatch { .. } => "E_CONDUCTOR",
            Error::DivisionByZero => "E_DIV_ZERO",
            Error::NonUnimodular => "E_NON_UNIMODULAR",
            Error::DimensionMismatch(_) => "E_DIMENSION",
            Error::ZeroRank => "E_ZERO_RANK",
            Error::InternalInconsistency(_) => "E_INTERNAL",
            Error::SearchExhausted(_) => "E_SEARCH_EXHAUSTED",
            Error::NoSuchStructure(_) => "E_NO_SUCH_STRUCTURE",
            Error::MissingElement(_) => "E_MISSING_ELEMENT",
            Error::NotComparable(_) => "E_NOT_COMPARABLE",
            Error::NotGenuine => "E_NOT_GENUINE",
            Error::InvalidStructure(_) => "E_INVALID_STRUCTURE",
            Error::TriangularityViolation => "E_TRIANGULARITY",
            Error::NotBlockDiagonalPart => "E_NOT_BLOCK_DIAGONAL",
            Error::FactorizationFailure(_) => "E_FACTORIZATION",
            Error::RelationViolation(_) => "E_RELATION",
            Error::ShapeMismatch(_) => "E_SHAPE",
            Error::InvalidArgument(_) => "E_ARGUMENT",
            Error::Parse { .. } => "E_PARSE",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
