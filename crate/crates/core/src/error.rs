use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QStateError {
    #[error("amplitude vector has length {len}, expected 2^{n_qubits}")]
    LengthMismatch { n_qubits: usize, len: usize },

    #[error("gate is not unitary (residual {residual:.3e})")]
    NonUnitary { residual: f64 },

    #[error("site {site} out of range for {n_qubits} qubits")]
    SiteOutOfRange { site: usize, n_qubits: usize },

    #[error("gate sites must be distinct (got {0} twice)")]
    RepeatedSite(usize),

    #[error("region sites are not contiguous: {0:?}")]
    NonContiguousRegion(Vec<usize>),

    #[error("region must be non-empty")]
    EmptyRegion,

    #[error("region must be a proper subset of the {n_qubits} sites")]
    RegionCoversAll { n_qubits: usize },

    #[error("state is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NonHermitian { asymmetry: f64 },

    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("Renyi index must be positive, got {0}")]
    InvalidAlpha(f64),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("subspace iteration did not converge after {iterations} sweeps (residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("eigendecomposition failed")]
    EigenFailure,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("least-squares fit is degenerate: {0}")]
    DegenerateFit(String),
}
