use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u64 },

    #[error("line {line}: duplicate link {u}-{v}")]
    DuplicateLink { line: usize, u: u64, v: u64 },

    #[error("line {line}: capacity and propagation delay must be given together")]
    MissingAttribute { line: usize },

    #[error("topology has no link attributes (capacity, propagation delay)")]
    Unweighted,

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("topology is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("empty input")]
    Empty,

    #[error("non-positive or non-finite value {0}")]
    NonPositive(f64),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("stub multiset mismatch: {0}")]
    InfeasibleStubs(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("alpha mismatch: topology carries {topology}, simulation configured with {config}")]
    AlphaMismatch { topology: f64, config: f64 },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
