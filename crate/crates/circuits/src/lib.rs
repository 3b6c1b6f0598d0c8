//! Random brickwork circuits (Haar, Clifford+T, U(1)) on qubit chains and
//! the perturbed states `(1 + ε O(t))|0⟩/√N_t` built from them.

pub mod autocorrelator;
pub mod circuit;
pub mod gates;
pub mod perturbed;

pub use autocorrelator::{infinite_temperature_autocorrelator, sign_averaged_center_expectation};
pub use circuit::{
    center_site, heisenberg_state, heisenberg_state_with, sample_clifford_t_timestep,
    CircuitRealization, EnsembleId, EnsembleParams, GateOp, Layer,
};
pub use gates::{sample_haar_gate, sample_u1_gate, SingleSiteDraw};
pub use perturbed::{
    perturbed_state, sample_u1_initial_state, u1_initial_state_from_signs, PerturbedState,
};

use hent_core::QStateError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CircuitError {
    #[error(transparent)]
    State(#[from] QStateError),
    #[error("requested depth {t} exceeds realized depth {depth}")]
    DepthExceeded { t: usize, depth: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("normalization N_t = {0} is not positive")]
    Normalization(f64),
}

pub type Result<T> = std::result::Result<T, CircuitError>;
