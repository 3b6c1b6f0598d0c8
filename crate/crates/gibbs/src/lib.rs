//! Mixed-field Ising chains by exact diagonalization, locally quenched Gibbs
//! states, and the entanglement of their canonical purification across
//! system-plus-ancilla cuts.

pub mod analysis;
pub mod ising;
pub mod paired;
pub mod quench;

pub use analysis::{
    area_law_bound_check, overlap_with_unquenched, perturbative_rank_check, thermal_rank,
    volume_coeff_fit, OverlapRecord, Regime, ScalingRecord,
};
pub use hent_core::schmidt::truncation_error;
pub use ising::{build_mixed_field_ising, IsingSpec, MAX_DENSE_SITES};
pub use paired::{
    exact_expectation, paired_matrix, paired_vector_state, purification_schmidt,
    purification_schmidt_top, truncated_expectation, truncated_expectation_with, PairedSpectrum,
    PauliString,
};
pub use quench::{
    estimated_bytes, IsingEigen, PurificationState, QuenchRun, DEFAULT_MEMORY_BUDGET,
};

use hent_core::QStateError;
use hent_spectra::SpectraError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GibbsError {
    #[error(transparent)]
    State(#[from] QStateError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("invalid Ising spec: {0}")]
    InvalidSpec(String),
    #[error("over budget: {0}")]
    Budget(String),
    #[error("eigendecomposition failed")]
    Eigen,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, GibbsError>;
