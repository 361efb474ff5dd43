//! Minimal quantum kernel: Bell labels, dense state vectors, and a
//! factorized particle register with symbolic and dense engines.

mod bell;
mod register;
mod state;

pub use bell::{Basis, BellLabel};
pub use register::{Engine, MeasurementKind, MeasurementRecord, QubitId, Register};
pub use state::{bell_amplitudes, photon_amplitudes, sample_index, StateVector, DEFAULT_QUBIT_CAP};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantumError {
    #[error("state would need {requested} qubits, above the cap of {cap}")]
    CapacityExceeded { requested: usize, cap: usize },
    #[error("qubit index {index} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("qubit {0} used twice in one measurement")]
    DuplicateQubit(usize),
    #[error("unknown qubit id {0}")]
    UnknownQubit(u32),
    #[error("amplitude vector of length {0} is not a qubit state")]
    BadDimension(usize),
    #[error("amplitude vector has zero norm")]
    ZeroVector,
    #[error("invalid qubit permutation")]
    BadPermutation,
    #[error("requested qubits are entangled with qubits outside the request")]
    NotSeparable,
}
