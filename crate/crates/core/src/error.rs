use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: expected two node tokens, found {found}")]
    MalformedLine { line: usize, found: usize },

    #[error("line {line}: self-loop on node `{node}`")]
    SelfLoop { line: usize, node: String },

    #[error("edge list contains no edges")]
    EmptyInput,

    #[error("network is disconnected ({reached} of {n} nodes reachable from node 0)")]
    Disconnected { reached: usize, n: usize },

    #[error("network needs at least {min} nodes, got {n}")]
    TooSmall { n: usize, min: usize },

    #[error("only dimension 2 is supported, got {0}")]
    DimensionUnsupported(usize),

    #[error("curvature must be positive, got {0}")]
    NonPositiveCurvature(f64),

    #[error("size mismatch: geodesic matrix has {expected} nodes, embedding has {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("target average degree {kbar} is infeasible for n = {n} (radius would be non-positive)")]
    InfeasibleTarget { n: usize, kbar: f64 },

    #[error("GLPM calibration infeasible: {0}")]
    CalibrationInfeasible(String),

    #[error("geodesic value {k} outside supported range 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("conditional distance row for k = {k} has no mass (raw total {mass:e})")]
    DegenerateRow { k: usize, mass: f64 },

    #[error("empirical p-value needs at least one null sample")]
    EmptySamples,

    #[error("only {used} connected replicates after {attempts} attempts (need {needed})")]
    TooFewReplicates {
        used: usize,
        attempts: usize,
        needed: usize,
    },

    #[error("could not draw a connected network within {attempts} attempts")]
    ConnectivityCapExceeded { attempts: usize },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
