use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("no token survived stop-word and document-frequency filtering")]
    EmptyVocabulary,

    #[error("document {doc} has no in-vocabulary tokens")]
    EmptyDocument { doc: usize },

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("need at least {needed} documents, found {found}")]
    TooFewDocuments { needed: usize, found: usize },

    #[error("negative mean {value} for word {word} (topic {topic:?}); cannot build a word-die")]
    NegativeMean {
        topic: Option<usize>,
        word: usize,
        value: f64,
    },

    #[error("word-die for topic {topic} has zero total weight")]
    DegenerateDie { topic: usize },

    #[error("label {label} out of range for {k} classes")]
    LabelOutOfRange { label: usize, k: usize },

    #[error("cost matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("cost matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("non-integer count {value} at document {doc}, word {word}")]
    NonIntegerCount { doc: usize, word: usize, value: f64 },

    #[error("no observed ratings to condition on")]
    NoObservedRatings,

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
