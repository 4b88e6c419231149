use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("out-of-order feedback: expected time index {expected}, got {got}")]
    Sequencing { expected: u64, got: u64 },

    #[error("loss {value} outside [0, 1]")]
    UnboundedLoss { value: f64 },

    #[error("learner needs a gradient but the loss function does not provide one")]
    MissingGradient,

    #[error("learner needs a minimizer but the loss function does not provide one")]
    MissingMinimizer,

    #[error("horizon exhausted: node of horizon {horizon} cannot take another step")]
    HorizonExhausted { horizon: u64 },

    #[error("horizon mismatch: algorithm horizon {algorithm}, environment horizon {environment}")]
    HorizonMismatch { algorithm: u64, environment: u64 },

    #[error("length mismatch: schedule covers {schedule} steps, sequence has {sequence}")]
    LengthMismatch { schedule: u64, sequence: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("exponent fit refused: {0}")]
    DegenerateFit(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}
