//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record at line {line}: {message}")]
    MalformedRecord { line: usize, message: String },
    #[error("duplicate dossier id: {id}")]
    DuplicateId { id: String },
    #[error("invalid dossier {id}: {message}")]
    InvalidDossier { id: String, message: String },
    #[error("text has no tokens")]
    EmptyText,
    #[error("price series has no entry at horizon {horizon} days")]
    MissingHorizon { horizon: u32 },
    #[error("need at least {needed} examples to split, got {got}")]
    TooFewExamples { needed: usize, got: usize },
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("invalid config: {field}: {message}")]
    InvalidConfig { field: String, message: String },
    #[error("vocabulary is empty after filtering")]
    EmptyVocabulary,
    #[error("document shares no token with the model vocabulary")]
    NoInVocabToken,
    #[error("index out of range: {what} {index} (max {max})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },
    #[error("unknown label '{label}' (not in tag scheme)")]
    UnknownLabel { label: String },
    #[error("empty sequence")]
    EmptySequence,
    #[error("label sequence length {labels} does not match token length {tokens}")]
    LengthMismatch { tokens: usize, labels: usize },
    #[error("empty test set")]
    EmptyTestSet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("bad embedding line {line}: expected {expected} values, got {got}")]
    BadEmbeddingLine {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("no document with at least two sentences; nothing to pretrain on")]
    NoNeighborPairs,
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("erasure influence undefined: erased score is zero")]
    UndefinedInfluence,
    #[error("missing prerequisite artifact from stage '{stage}': {path}")]
    MissingPrerequisite { stage: &'static str, path: String },
    #[error("bad artifact {path}: {message}")]
    BadArtifact { path: String, message: String },
    #[error("{0}")]
    Other(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
