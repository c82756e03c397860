use std::path::PathBuf;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("noise scaling factor must be odd and positive, got {0}")]
    InvalidLambda(i64),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("channel is not trace preserving (max deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("invalid probability: {0}")]
    InvalidProbability(String),

    #[error("noise model does not resolve gate {0}")]
    UnresolvedGate(String),

    #[error("circuit has {qubits} qubits, simulator cap is {cap}")]
    TooManyQubits { qubits: usize, cap: usize },

    #[error("diagonal of density matrix sums to {mass}, not 1")]
    InvalidDistribution { mass: f64 },

    #[error("no unique error-strength solution: P0 = {p0} <= a = {a}")]
    NoUniqueSolution { p0: f64, a: f64 },

    #[error("fit needs {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("all abscissas are identical ({0}); linear fit is degenerate")]
    DegenerateAbscissa(f64),

    #[error("exponential fit did not converge: {0}")]
    FitDidNotConverge(String),

    #[error("readout confusion matrix is singular: {0}")]
    SingularConfusion(String),

    #[error("calibration: {0}")]
    Calibration(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
