//! Spike-cloud decomposition of perturbed reduced states, Rényi-entropy
//! bounds, the nested spike hierarchy and the `α_c` estimator.

pub mod alpha_c;
pub mod bounds;
pub mod fannes;
pub mod hierarchy;
pub mod spike;

pub use alpha_c::{alpha_c_estimate, scrambled_alpha_c, AlphaCEstimate, AlphaSlope, RenyiCurve};
pub use bounds::{
    check_overlap_bound, check_overlap_lemma, check_renyi_bounds, overlap_lemma_ceiling,
    BoundRecord, BoundsReport, OverlapCheck,
};
pub use fannes::{fannes_audenaert_bound, trace_distance};
pub use hierarchy::{cut_weights, hierarchy, HierarchyLevel};
pub use spike::{spike_cloud_decompose, SpikeCloud};

use hent_core::{QStateError, Region};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectraError {
    #[error(transparent)]
    State(#[from] QStateError),
    #[error("cut {0:?} has no contiguous complement")]
    NonContiguousComplement(Region),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, SpectraError>;
