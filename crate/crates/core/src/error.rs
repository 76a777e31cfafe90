use std::path::PathBuf;

use thiserror::Error;

use crate::phoneset::Phone;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown phone symbol {0:?}")]
    UnknownPhone(String),

    #[error("non-Hangul character {ch:?} at offset {offset}")]
    NonHangulInput { ch: char, offset: usize },

    #[error("no canonical phones to score")]
    EmptyCorpus,

    #[error("matrix has no supported phone rows")]
    EmptyMatrix,

    #[error("row for {0} has insufficient support")]
    UnsupportedRow(Phone),

    #[error("contingency table has a zero marginal")]
    DegenerateTable,

    #[error("dependence scan needs at least two groups, got {0}")]
    InsufficientGroups(usize),

    #[error("invalid error model: {0}")]
    InvalidModel(String),

    #[error("unknown group code {0:?}")]
    UnknownGroup(String),

    #[error("{}", format_manifest_errors(.0))]
    Manifest(Vec<ManifestError>),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed input: {0}")]
    Parse(String),
}

/// One rejected manifest line.
#[derive(Debug, Error)]
#[error("line {line}: {kind}")]
pub struct ManifestError {
    pub line: usize,
    pub kind: ManifestErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ManifestErrorKind {
    #[error("malformed record: {0}")]
    Parse(String),
    #[error("unknown phone symbol {0:?}")]
    UnknownPhone(String),
    #[error("unknown group code {0:?}")]
    UnknownGroup(String),
}

fn format_manifest_errors(errors: &[ManifestError]) -> String {
    let mut out = format!("{} bad manifest record(s)", errors.len());
    for e in errors.iter().take(10) {
        out.push_str("\n  ");
        out.push_str(&e.to_string());
    }
    if errors.len() > 10 {
        out.push_str("\n  ...");
    }
    out
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
