use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid weight specification: {0}")]
    InvalidSpec(String),

    #[error("attribute {index} has probability {value}, outside [0, 1]")]
    ProbabilityOutOfRange { index: usize, value: f64 },

    #[error("criticality must be positive, got {0}")]
    NonPositiveCriticality(f64),

    #[error("exhaustive enumeration needs n*m <= {limit}, got n*m = {nm}")]
    InstanceTooLarge { nm: usize, limit: usize },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("weight vectors have different vertex counts ({0} vs {1})")]
    MismatchedVertexCount(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("outside the domain of the formula: {0}")]
    Domain(String),

    #[error("malformed sample: {0}")]
    MalformedSample(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}
