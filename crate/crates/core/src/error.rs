use thiserror::Error;

/// Errors raised by the simulator, circuit builders and training pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("qubit index {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("gate {gate} acts on {expected} qubits but {found} were given")]
    ArityMismatch {
        gate: String,
        expected: usize,
        found: usize,
    },

    #[error("state is not normalized (norm squared {0})")]
    NotNormalized(f64),

    #[error("cannot reset qubits entangled with the rest of the register (reduced purity {purity})")]
    EntangledReset { purity: f64 },

    #[error("circuit contains a reset operation and has no unitary")]
    ResetInUnitary,

    #[error("reference matrix is numerically zero")]
    ZeroMatrix,

    #[error("{name} = {value} is outside the supported range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty data set")]
    EmptyData,

    #[error("unknown identifier '{0}'")]
    UnknownIdentifier(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("shape mismatch: expected {expected} parameters, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
