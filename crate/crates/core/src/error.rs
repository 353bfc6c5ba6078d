use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian within tolerance (deviation {deviation:.3e})")]
    NonHermitianInput { deviation: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("not a density matrix: {reason}")]
    NotAState { reason: String },

    #[error("unitary {index} deviates from unitarity by {deviation:.3e}")]
    NonUnitary { index: usize, deviation: f64 },

    #[error("optimizer produced a non-finite value")]
    ConvergenceFailure,

    #[error("chi(omega) has a pole at omega = {omega}")]
    PoleAt { omega: f64 },

    #[error("degenerate fit: all sample weights vanish")]
    DegenerateFit,

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("gate index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },

    #[error("{field} must be positive (got {value})")]
    NonPositiveInput { field: &'static str, value: f64 },

    #[error("invalid input at {path}: {reason}")]
    InvalidInput { path: String, reason: String },
}
