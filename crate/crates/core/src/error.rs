//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, ZneError>;

#[derive(Debug, Error)]
pub enum ZneError {
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("two-qubit gate requires distinct qubits, got {0}")]
    DegenerateQubitPair(usize),

    #[error("circuit must have at least one qubit")]
    EmptyRegister,

    #[error("invalid noise channel: {0}")]
    InvalidChannel(String),

    #[error("invalid relaxation times: {0}")]
    InvalidRelaxation(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("basis state {state} out of range for dimension {dim}")]
    BasisStateOutOfRange { state: usize, dim: usize },

    #[error("invalid insertion plan: {0}")]
    InvalidPlan(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("least-squares system is singular: {0}")]
    SingularFit(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("failed to parse circuit: {0}")]
    CircuitParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
