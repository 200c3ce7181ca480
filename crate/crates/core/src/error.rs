use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed pcap global header: {0}")]
    PcapHeader(String),

    #[error("unsupported pcap link type {0} (expected 127 radiotap or 105 bare 802.11)")]
    UnsupportedLinkType(u32),

    #[error("radiotap header truncated: declares {declared} bytes, buffer holds {available}")]
    RadiotapTruncated { declared: usize, available: usize },

    #[error("radiotap header: {0}")]
    Radiotap(String),

    #[error("frame {index} in {path} has no radiotap channel and the file declares none")]
    UnresolvedChannel { path: String, index: usize },

    #[error("no bursts found")]
    NoBursts,

    #[error("cosine similarity of a zero vector")]
    ZeroVector,

    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("cannot fit {k} clusters to {rows} rows")]
    TooFewRows { k: usize, rows: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("labelings cover different burst sets")]
    MismatchedBursts,

    #[error("population size {p} out of range 1..={max}")]
    PopulationOutOfRange { p: usize, max: usize },

    #[error("{path}:{line}: {message}")]
    FeatureFile {
        path: String,
        line: u64,
        message: String,
    },

    #[error("evaluation needs ground truth: burst {0} has no truth_device")]
    MissingTruth(u64),

    #[error("dataset root {0} holds no captures; expected <root>/<device-id>/<channel>.pcap")]
    EmptyDataset(PathBuf),

    #[error("output directory {0} is not empty (pass overwrite to replace it)")]
    OutputExists(PathBuf),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
