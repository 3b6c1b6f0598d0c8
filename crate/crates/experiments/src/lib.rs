//! Experiment registry, configuration, seeded ensemble orchestration and
//! CSV/manifest emission.

pub mod config;
pub mod experiments;
pub mod records;
pub mod registry;
pub mod runner;

pub use config::{parse_override, ExperimentConfig, ExperimentId, Model, MAX_CIRCUIT_SITES};
pub use records::{
    fmt_float, validate_csv, BoundsRow, Manifest, RenyiRow, ResultSet, SampleFailure, ScalingRow,
    SchmidtRow, SummaryRow,
};
pub use runner::{run_and_write, run_experiment, RunOptions, RunSummary};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("config: {0}")]
    Config(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    State(#[from] hent_core::QStateError),
    #[error(transparent)]
    Circuit(#[from] hent_circuits::CircuitError),
    #[error(transparent)]
    Spectra(#[from] hent_spectra::SpectraError),
    #[error(transparent)]
    Gibbs(#[from] hent_gibbs::GibbsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
