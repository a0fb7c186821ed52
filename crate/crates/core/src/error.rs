use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read `{}`: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write `{}`: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}:{line}: {message}", path.display())]
    Record {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("duplicate case id `{0}`")]
    DuplicateId(String),

    #[error("case id must not be empty")]
    EmptyId,

    #[error("no indexable cases: every title tokenizes to empty")]
    EmptyCorpus,

    #[error("case `{0}`: title tokenizes to empty")]
    EmptyTitle(String),

    #[error("unknown case id `{0}`")]
    UnknownCase(String),

    #[error("case id cannot be changed (`{from}` -> `{to}`)")]
    IdChange { from: String, to: String },

    #[error("term `{0}` is not indexed")]
    TermNotIndexed(String),

    #[error("case base is empty")]
    EmptyCaseBase,

    #[error("nothing to reuse: retrieval returned no cases")]
    NothingToReuse,

    #[error("corrupt index: {0}")]
    CorruptIndex(String),

    #[error("unsupported index format version {found} (this build reads version {supported})")]
    UnsupportedVersion { found: u64, supported: u64 },

    #[error("index checksum mismatch: weight table hashes to {computed}, file records {stored}")]
    ChecksumMismatch { stored: String, computed: String },
}
