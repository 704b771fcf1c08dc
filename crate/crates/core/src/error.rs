use thiserror::Error;

/// Errors produced by loaders, kernels, and analyses.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: malformed line: {detail}")]
    MalformedLine {
        path: String,
        line: usize,
        detail: String,
    },

    #[error("{path}:{line}: expected {expected} values, found {found} (word {word:?})")]
    DimensionMismatch {
        path: String,
        line: usize,
        word: String,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value for word {word:?} in {context}")]
    NonFinite { word: String, context: String },

    #[error("duplicate word {word:?} in {context}")]
    DuplicateWord { word: String, context: String },

    #[error("value {value:?} for word {word:?} is not in the label set of norm {norm:?}")]
    UnknownLabel {
        norm: String,
        word: String,
        value: String,
    },

    #[error("norm {norm:?} is empty after dropping rows with missing values")]
    EmptyTable { norm: String },

    #[error("manifest {path}: {detail}")]
    Manifest { path: String, detail: String },

    #[error("embedding row for {word:?} has zero norm")]
    ZeroNormRow { word: String },

    #[error("subsetting left an empty vocabulary")]
    EmptySubset,

    #[error("common vocabulary has {size} words; at least {required} required")]
    CommonVocabularyTooSmall { size: usize, required: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("degenerate target: variance of y is zero")]
    DegenerateTarget,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular value decomposition did not converge")]
    SvdFailure,

    #[error("matrix for {context} has missing cells")]
    MissingCells { context: String },

    #[error("norm {norm:?} is not mapped to a category")]
    UnmappedNorm { norm: String },

    #[error("profiles do not match: {0}")]
    MismatchedProfiles(String),

    #[error("invalid render spec: {0}")]
    InvalidRenderSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
