use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("zero valid rows ({malformed} malformed)")]
    NoValidRows { malformed: usize },
    #[error("edge list is empty")]
    EmptyEdgeList,
    #[error("bin width must be positive, got {0}")]
    InvalidBinWidth(i64),
    #[error("a triad has exactly 3 nodes, got {0}")]
    TriadArity(usize),
    #[error("null ensemble degree signature does not match the snapshot")]
    DegreeSignatureMismatch,
    #[error("graphlet size must be 4 or 5, got {0}")]
    InvalidGraphletSize(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("unknown cluster {0}")]
    UnknownCluster(i64),
    #[error("ordering by cluster requires a cluster assignment")]
    MissingClusters,
    #[error("ordering by metric requires one value per column")]
    MissingMetric,
    #[error("nothing to render")]
    NothingToRender,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Image(#[from] image::ImageError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
