use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),
    #[error("matrix is not unitary: |U^dagger U - I|_F = {0:e}")]
    NotUnitary(f64),
    #[error("matrix is not a density matrix: {0}")]
    NotDensityMatrix(&'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{requested} qubits exceeds the configured cap of {cap}")]
    QubitCapExceeded { requested: usize, cap: usize },
    #[error("qubit label {label} is out of range for a {n_qubits}-qubit system")]
    LabelOutOfRange { label: usize, n_qubits: usize },
    #[error("qubit label {0} appears more than once")]
    DuplicateLabel(usize),
    #[error("set of kept qubits is empty")]
    EmptyKeep,
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(&'static str),
    #[error("malformed truth table: {0}")]
    MalformedTable(String),
    #[error("entry {0} of a phase oracle diagonal is not +1 or -1")]
    NotPhase(usize),
    #[error("matrix is not special unitary: |det - 1| = {0:e}")]
    NotSpecialUnitary(f64),
    #[error("oracle is entangling and cannot be written as a product of single-beam elements")]
    NotFactorizable,
    #[error("circuit is malformed: {0}")]
    MalformedCircuit(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
