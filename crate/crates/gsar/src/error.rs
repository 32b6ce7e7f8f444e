use thiserror::Error;

/// Errors surfaced by the validating constructors, the corpus loaders, and
/// the harness utilities. Judge parsing and the replan loop are total and do
/// not produce errors; they degrade to safe defaults instead.
#[derive(Debug, Error)]
pub enum Error {
    /// A domain object failed its construction-time validation.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// Two claim lists of a partition share a claim identity.
    #[error("partition classes overlap on claim {text:?} ({first} vs {second})")]
    PartitionOverlap {
        text: String,
        first: &'static str,
        second: &'static str,
    },

    /// A configuration document contained a bad key or value.
    #[error("invalid config: {0}")]
    Config(String),

    /// A score left the unit interval before a decision could be taken.
    #[error("score {0} outside [0, 1]")]
    ScoreOutOfRange(f64),

    /// A dataset row failed to parse or violated a record invariant.
    #[error("dataset {path}, line {line}: {reason}")]
    Dataset {
        path: String,
        line: usize,
        reason: String,
    },

    /// A sample was requested that the dataset cannot provide.
    #[error("requested {requested} records but {path} holds only {available}")]
    SampleTooLarge {
        requested: usize,
        available: usize,
        path: String,
    },

    /// Query and store disagree on embedding dimension.
    #[error("embedding dimension mismatch: store is {store}, query is {query}")]
    DimensionMismatch { store: usize, query: usize },

    /// A statistic was asked of an input too small to support it.
    #[error("{what} requires at least {min} items, got {got}")]
    InsufficientData {
        what: &'static str,
        min: usize,
        got: usize,
    },

    /// File or process level IO failure.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A line-oriented artifact (trace file, replay file) failed to parse.
    #[error("{path}, line {line}: {reason}")]
    Artifact {
        path: String,
        line: usize,
        reason: String,
    },
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
