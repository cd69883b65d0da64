use thiserror::Error;

/// Every failure the library can report.
///
/// Pipelines surface these in traces by [`Error::kind`], so the variant names
/// are part of the trace format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element {element} is not in the domain of order {order}")]
    DomainError { order: String, element: String },

    #[error("unknown order `{0}`")]
    UnknownOrder(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },

    #[error("unsupported base order `{0}` (oracle needs omega)")]
    UnsupportedBase(String),

    #[error("term is not in normal form: {0}")]
    NotNormalForm(String),

    #[error("indices must be strictly increasing: {0:?}")]
    IndexError(Vec<usize>),

    #[error("sequence is not descending at indices {0} and {1}")]
    NotDescending(usize, usize),

    #[error("arity error: {0}")]
    ArityError(String),

    #[error("invalid colour: {0}")]
    InvalidColor(String),

    #[error("set {0:?} is not exactly large")]
    NotExactlyLarge(Vec<usize>),

    #[error("colour contract violated: expected {expected}, tuple {tuple:?} has {found}")]
    ColourMismatch {
        expected: String,
        found: String,
        tuple: Vec<usize>,
    },

    #[error("comparing exponent does not exist ({0})")]
    StarEncountered(String),

    #[error("witness too shallow: {0}")]
    WitnessTooShallow(String),

    #[error("term has no epsilon subterm at the requested position ({0})")]
    BelowEpsilonZero(String),

    #[error("block sequence exhausted: {0}")]
    BlocksExhausted(String),

    #[error("property P violated at index {index}: decreaser {decreaser} lies beyond bound {bound}")]
    PropertyPViolated {
        index: usize,
        decreaser: usize,
        bound: usize,
    },

    #[error("range exhausted: {0}")]
    RangeExhausted(String),

    #[error("order `{0}` has no descending witness")]
    NotDescendingWitness(String),

    #[error("sequence prefix exhausted at index {0}")]
    PrefixExhausted(usize),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Stable variant name used in traces.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DomainError { .. } => "DomainError",
            Error::UnknownOrder(_) => "UnknownOrder",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::LevelMismatch { .. } => "LevelMismatch",
            Error::UnsupportedBase(_) => "UnsupportedBase",
            Error::NotNormalForm(_) => "NotNormalForm",
            Error::IndexError(_) => "IndexError",
            Error::NotDescending(..) => "NotDescending",
            Error::ArityError(_) => "ArityError",
            Error::InvalidColor(_) => "InvalidColor",
            Error::NotExactlyLarge(_) => "NotExactlyLarge",
            Error::ColourMismatch { .. } => "ColourMismatch",
            Error::StarEncountered(_) => "StarEncountered",
            Error::WitnessTooShallow(_) => "WitnessTooShallow",
            Error::BelowEpsilonZero(_) => "BelowEpsilonZero",
            Error::BlocksExhausted(_) => "BlocksExhausted",
            Error::PropertyPViolated { .. } => "PropertyPViolated",
            Error::RangeExhausted(_) => "RangeExhausted",
            Error::NotDescendingWitness(_) => "NotDescendingWitness",
            Error::PrefixExhausted(_) => "PrefixExhausted",
            Error::Parameter(_) => "Parameter",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
