use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("capacity exceeded: {requested} qubits requested, at most {max} supported")]
    Capacity { requested: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("qubit {qubit} is out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("qubit {0} appears more than once in the target list")]
    DuplicateTarget(usize),

    #[error("basis index {index} is out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("basis map is not a bijection: index {0} is hit twice")]
    NotBijective(usize),

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("matrix is not unitary: max deviation {0:e}")]
    NotUnitary(f64),

    #[error("qubits {0:?} are not in a definite basis state and cannot be discarded")]
    NotSeparable(Vec<usize>),

    #[error("{builder} symmetry breaker requested for k = {k}")]
    WrongParity { builder: &'static str, k: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    #[error("cannot summarize an empty transcript list")]
    EmptyTranscripts,

    #[error("transcripts mix algorithms or processor counts")]
    MixedTranscripts,
}
