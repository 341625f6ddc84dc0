//! Error type shared across the toolkit.

use thiserror::Error;

use crate::corpus::Language;

/// Toolkit-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("no questions survived the filters in {path}")]
    EmptyCorpus { path: String },

    #[error("question {id} has score 0 and cannot be labeled")]
    Unlabelable { id: u64 },

    #[error("empty corpus: at least one question is required")]
    EmptyInput,

    #[error("cannot undersample: class {0:?} is absent")]
    MissingClass(crate::corpus::QualityLabel),

    #[error("reference text tokenizes to nothing; the metric is undefined")]
    EmptyReference,

    #[error("metric is undefined on empty text")]
    EmptyText,

    #[error("question title is empty")]
    EmptyTitle,

    #[error("prose is empty while code is present; text-code ratio is undefined")]
    UndefinedRatio,

    #[error("tag list is empty")]
    EmptyTagList,

    #[error("tag {tag:?} is not in the frequency table")]
    TagNotInTable { tag: String },

    #[error("sentiment lexicon is empty")]
    EmptyLexicon,

    #[error("lexicon strength {strength} for {term:?} is outside [-5,-2] U [2,5]")]
    InvalidLexiconStrength { term: String, strength: i64 },

    #[error("question has no code blocks")]
    NoCodeBlocks,

    #[error("no parser backend registered for {0:?}")]
    NoBackend(Language),

    #[error("readability weights cover {got} features, expected {expected}")]
    WeightDimension { expected: usize, got: usize },

    #[error("sample {which} is empty")]
    EmptySample { which: &'static str },

    #[error("pooled sample of {got} values is too small for quartile analysis (need >= {min})")]
    PooledTooSmall { got: usize, min: usize },

    #[error("class {label:?} has {got} applicable rows, need >= {min}")]
    InsufficientClass {
        label: crate::corpus::QualityLabel,
        got: usize,
        min: usize,
    },

    #[error("column and label lengths differ: {column} vs {labels}")]
    LengthMismatch { column: usize, labels: usize },

    #[error("dataset is not rectangular: row {row} has {got} values, expected {expected}")]
    RaggedDataset {
        row: usize,
        got: usize,
        expected: usize,
    },

    #[error("feature {0:?} is not in the dataset")]
    UnknownFeature(String),

    #[error("non-finite value in feature {feature:?} at row {row}")]
    NonFiniteFeature { feature: String, row: usize },

    #[error("training set contains a single class")]
    SingleClassTraining,

    #[error("class {label:?} has {got} rows, fewer than the {k} folds")]
    ClassSmallerThanFolds {
        label: crate::corpus::QualityLabel,
        got: usize,
        k: usize,
    },

    #[error("row has {got} features, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("model was trained on features [{model}], input provides [{input}]")]
    FeatureSetMismatch { model: String, input: String },

    #[error("parameter grid is empty")]
    EmptyGrid,

    #[error("invalid hyperparameter {name}={value}: {reason}")]
    InvalidParam {
        name: String,
        value: String,
        reason: String,
    },

    #[error("predictions and truth lengths differ: {predictions} vs {truth}")]
    EvalLengthMismatch { predictions: usize, truth: usize },

    #[error("malformed {what} at line {line}: {message}")]
    Malformed {
        what: &'static str,
        line: usize,
        message: String,
    },

    #[error("unsupported model file: {0}")]
    ModelFormat(String),
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
