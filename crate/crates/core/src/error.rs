use thiserror::Error;

/// Errors raised by the simulator and the algorithm pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },

    #[error("wire {wire} out of range 1..={n_wires}")]
    WireOutOfRange { wire: usize, n_wires: usize },

    #[error("wire {0} appears more than once in one gate")]
    RepeatedWire(usize),

    #[error("gate arity {arity} does not match {wires} wires")]
    ArityMismatch { arity: usize, wires: usize },

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("amplitude at index {0} is not finite")]
    NonFinite(usize),

    #[error("{required} qubits required, simulator cap is {cap}")]
    TooManyQubits { required: usize, cap: usize },

    #[error("invalid value for `{field}`: {reason}")]
    InvalidArgument { field: &'static str, reason: String },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("sample rows span all of F2^{0}; no nonzero shift is orthogonal to them")]
    InconsistentSamples(usize),

    #[error("rank {rank} after {rounds} rounds, need {needed}")]
    RoundsExhausted {
        rounds: usize,
        rank: usize,
        needed: usize,
    },

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            field,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
