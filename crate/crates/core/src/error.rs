use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("qubit index {index} out of range for a {n}-qubit register")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("overlapping qubits: qubit {0} is used by more than one gate in a layer")]
    OverlappingQubits(usize),

    #[error("invalid single-qubit Clifford id {0} (expected 0..=23)")]
    InvalidClifford(u32),

    #[error("{what}: width {n} exceeds the limit of {limit} qubits")]
    WidthLimit {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("circuit is not in alternating form: {0}")]
    NotAlternating(String),

    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("estimate undefined: {0}")]
    EstimateUndefined(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
