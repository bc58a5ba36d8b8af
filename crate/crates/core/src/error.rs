use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("form degree {0} exceeds the supported maximum")]
    DegreeOverflow(usize),
    #[error("unit monomial with zero coefficient")]
    ZeroUnit,
    #[error("unknown variable index {0}")]
    UnknownVariable(usize),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("zero denominator at offset {offset}")]
    ZeroDenominator { offset: usize },
    #[error("chart basis is not unimodular")]
    NotUnimodular,
    #[error("invalid atlas: {0}")]
    InvalidAtlas(String),
    #[error("unknown built-in atlas `{0}`")]
    UnknownAtlas(String),
    #[error("chart carries no boundary data")]
    NoBoundaryData,
    #[error("atlas has no compactification")]
    MissingCompactification,
    #[error("cochain is not a cocycle at {0:?}")]
    NotACocycle(Vec<usize>),
    #[error("connection forms are not compatible with the cocycle at {0:?}")]
    Incompatible(Vec<usize>),
    #[error("objects live on different atlases")]
    AtlasMismatch,
    #[error("form is not regular on chart {0}")]
    NotRegular(usize),
    #[error("local curvatures disagree on overlap {0:?}")]
    CurvatureMismatch(Vec<usize>),
    #[error("unsupported atlas: {0}")]
    UnsupportedAtlas(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
