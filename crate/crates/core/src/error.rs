use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("measure space needs at least one atom")]
    EmptySpace,

    #[error("weight {value} at atom {index} is not finite and strictly positive")]
    InvalidWeight { index: usize, value: f64 },

    #[error("{context}: expected length {expected}, found {found}")]
    LengthMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{context}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{0}: operands live on different measure spaces")]
    SpaceMismatch(&'static str),

    #[error("{0}: non-finite entry")]
    NonFinite(&'static str),

    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("not a frame: lower bound {lower:e} does not exceed threshold {threshold:e}")]
    NotAFrame { lower: f64, threshold: f64 },

    #[error("frame is not redundant; its only dual is the canonical one")]
    NotRedundant,

    #[error("tensor factors must both have dimension > 1 (got {0} and {1})")]
    FactorsTooSmall(usize, usize),

    #[error("no candidate Bessel family produced a non-simple dual")]
    NoNonSimpleDual,

    #[error("invalid Schatten exponent p = {0}")]
    InvalidExponent(f64),

    #[error("window is identically zero")]
    ZeroWindow,

    #[error("window is not admissible: {0}")]
    NotAdmissible(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("symbol integrates to zero")]
    ZeroIntegral,

    #[error("windows are orthogonal")]
    OrthogonalWindows,

    #[error("symbol value {value} at atom {index} is negative or not real")]
    NegativeSymbol { index: usize, value: String },

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("unknown window preset `{0}`")]
    UnknownPreset(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
