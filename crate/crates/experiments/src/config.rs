//! Flat key-value experiment configuration with layered defaults and
//! `key=value` overrides.

use crate::{ExperimentError, Result};
use hent_circuits::EnsembleId;
use hent_gibbs::{estimated_bytes, MAX_DENSE_SITES};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// Largest circuit chain, `2^18` amplitudes.
pub const MAX_CIRCUIT_SITES: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    Fig1Truncation,
    Fig2HaarHierarchy,
    Fig3GibbsRenyi,
    Fig4CliffordT,
    Fig5U1,
    Fig6Timedep,
    Fig7VolumeCoeff,
    Fig8BthetaCollapse,
    BoundsSuite,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 9] = [
        ExperimentId::Fig1Truncation,
        ExperimentId::Fig2HaarHierarchy,
        ExperimentId::Fig3GibbsRenyi,
        ExperimentId::Fig4CliffordT,
        ExperimentId::Fig5U1,
        ExperimentId::Fig6Timedep,
        ExperimentId::Fig7VolumeCoeff,
        ExperimentId::Fig8BthetaCollapse,
        ExperimentId::BoundsSuite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Fig1Truncation => "fig1_truncation",
            ExperimentId::Fig2HaarHierarchy => "fig2_haar_hierarchy",
            ExperimentId::Fig3GibbsRenyi => "fig3_gibbs_renyi",
            ExperimentId::Fig4CliffordT => "fig4_clifford_t",
            ExperimentId::Fig5U1 => "fig5_u1",
            ExperimentId::Fig6Timedep => "fig6_timedep",
            ExperimentId::Fig7VolumeCoeff => "fig7_volume_coeff",
            ExperimentId::Fig8BthetaCollapse => "fig8_btheta_collapse",
            ExperimentId::BoundsSuite => "bounds_suite",
        }
    }

    /// First index of every random-stream key drawn by this experiment.
    pub fn stream_code(self) -> u64 {
        ExperimentId::ALL.iter().position(|&e| e == self).unwrap() as u64 + 1
    }

    fn uses_gibbs(self, cfg: &ExperimentConfig) -> bool {
        match self {
            ExperimentId::Fig1Truncation
            | ExperimentId::Fig3GibbsRenyi
            | ExperimentId::Fig7VolumeCoeff
            | ExperimentId::Fig8BthetaCollapse => true,
            ExperimentId::Fig6Timedep => cfg.model == Model::Gibbs,
            _ => false,
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| ExperimentError::Config(format!("unknown experiment_id `{s}`")))
    }
}

/// Which system a time-dependence run follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    #[default]
    Circuit,
    Gibbs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment_id: ExperimentId,
    /// Chain lengths `L`.
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default = "defaults::samples")]
    pub samples: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "hent_core::standard_alpha_grid")]
    pub alpha_grid: Vec<f64>,
    #[serde(default = "defaults::output_dir")]
    pub output_dir: PathBuf,

    // circuit models
    #[serde(default = "defaults::ensemble")]
    pub ensemble: String,
    /// Perturbation strengths; the first drives the Rényi rows, every entry
    /// gets an `S₂` row.
    #[serde(default = "defaults::epsilon")]
    pub epsilon: Vec<f64>,
    #[serde(default = "defaults::p_t")]
    pub p_t: f64,
    /// Circuit depth `t = round(r L)`.
    #[serde(default = "defaults::depth_ratio")]
    pub depth_ratio: Vec<f64>,
    /// Pick `r` by doubling `depth_ratio[0]` until the sample-mean `S_{1/2}`
    /// at the largest `L` moves by less than `plateau_tol` (relative).
    #[serde(default)]
    pub plateau: bool,
    #[serde(default = "defaults::plateau_tol")]
    pub plateau_tol: f64,
    #[serde(default = "defaults::max_depth_ratio")]
    pub max_depth_ratio: f64,
    /// Hierarchy depth.
    #[serde(default = "defaults::levels")]
    pub levels: usize,
    /// Slope below which `S_α` counts as constant in `L`.
    #[serde(default = "defaults::threshold")]
    pub threshold: f64,
    /// Bound families drawn by the bounds suite: `renyi`, `overlap`, `lemma`.
    #[serde(default = "defaults::families")]
    pub families: Vec<String>,

    // mixed-field Ising quench
    #[serde(default = "defaults::g")]
    pub g: f64,
    #[serde(default = "defaults::h")]
    pub h: f64,
    #[serde(default = "defaults::boundary")]
    pub boundary: bool,
    #[serde(default = "defaults::beta")]
    pub beta: f64,
    #[serde(default = "defaults::theta")]
    pub theta: f64,
    /// Absolute times; when empty, `t = L^time_power`.
    #[serde(default)]
    pub times: Vec<f64>,
    #[serde(default = "defaults::time_power")]
    pub time_power: f64,
    /// Schmidt ranks kept.
    #[serde(default = "defaults::k")]
    pub k: Vec<usize>,
    /// Pauli strings such as `Z0`; `zstring` is `Z` on every site of `A`.
    #[serde(default)]
    pub operators: Vec<String>,
    #[serde(default)]
    pub beta_scan: Vec<f64>,
    #[serde(default)]
    pub theta_scan: Vec<f64>,
    /// Fixed `θ` of the `β` scan, which keeps one Schmidt state.
    #[serde(default = "defaults::scan_theta")]
    pub scan_theta: f64,
    /// Fixed `β` of the `θ` scan.
    #[serde(default = "defaults::scan_beta")]
    pub scan_beta: f64,
    /// Ranks kept in the `θ` scan; 0 keeps the thermal rank.
    #[serde(default = "defaults::theta_scan_k")]
    pub theta_scan_k: usize,
    /// Schmidt weights written per spectrum.
    #[serde(default = "defaults::schmidt_ranks")]
    pub schmidt_ranks: usize,
    #[serde(default)]
    pub model: Model,
    #[serde(default = "defaults::memory_budget_gib")]
    pub memory_budget_gib: f64,
}

mod defaults {
    use std::path::PathBuf;

    pub fn samples() -> usize {
        1
    }
    pub fn output_dir() -> PathBuf {
        PathBuf::from("out")
    }
    pub fn ensemble() -> String {
        "haar".into()
    }
    pub fn epsilon() -> Vec<f64> {
        vec![0.4]
    }
    pub fn p_t() -> f64 {
        0.5
    }
    pub fn depth_ratio() -> Vec<f64> {
        vec![2.0]
    }
    pub fn plateau_tol() -> f64 {
        0.02
    }
    pub fn max_depth_ratio() -> f64 {
        32.0
    }
    pub fn levels() -> usize {
        2
    }
    pub fn threshold() -> f64 {
        hent_spectra::alpha_c::SLOPE_THRESHOLD
    }
    pub fn families() -> Vec<String> {
        vec!["renyi".into(), "overlap".into()]
    }
    pub fn g() -> f64 {
        1.1
    }
    pub fn h() -> f64 {
        0.35
    }
    pub fn boundary() -> bool {
        true
    }
    pub fn beta() -> f64 {
        1.0
    }
    pub fn theta() -> f64 {
        0.5
    }
    pub fn time_power() -> f64 {
        2.0
    }
    pub fn k() -> Vec<usize> {
        vec![1]
    }
    pub fn scan_theta() -> f64 {
        0.5
    }
    pub fn scan_beta() -> f64 {
        0.8
    }
    pub fn theta_scan_k() -> usize {
        4
    }
    pub fn schmidt_ranks() -> usize {
        32
    }
    pub fn memory_budget_gib() -> f64 {
        4.0
    }
}

/// Parses `key=value`; the value is read as a TOML value and falls back to
/// a bare string.
pub fn parse_override(s: &str) -> Result<(String, toml::Value)> {
    let (key, raw) = s
        .split_once('=')
        .ok_or_else(|| ExperimentError::Config(format!("override `{s}` is not key=value")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(ExperimentError::Config(format!("override `{s}` has an empty key")));
    }
    let raw = raw.trim();
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    Ok((key.to_string(), value))
}

impl ExperimentConfig {
    /// Registry defaults for the file's `experiment_id`, then the file, then
    /// `overrides` in order.
    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(text)
            .map_err(|e| ExperimentError::Config(format!("config parse error: {e}")))?;
        for o in overrides {
            let (k, v) = parse_override(o)?;
            table.insert(k, v);
        }
        let id: ExperimentId = match table.get("experiment_id") {
            Some(toml::Value::String(s)) => s.parse()?,
            Some(other) => {
                return Err(ExperimentError::Config(format!(
                    "experiment_id must be a string, got {other}"
                )))
            }
            None => return Err(ExperimentError::Config("experiment_id is missing".into())),
        };
        let mut merged: toml::Table = toml::from_str(crate::registry::entry(id).defaults)
            .expect("registry defaults parse");
        merged.extend(table);
        let cfg: ExperimentConfig = toml::Value::Table(merged)
            .try_into()
            .map_err(|e: toml::de::Error| ExperimentError::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn defaults_for(id: ExperimentId) -> Self {
        Self::from_toml_str(&format!("experiment_id = \"{id}\""), &[])
            .expect("registry defaults validate")
    }

    /// Applies further `key=value` overrides and revalidates.
    pub fn with_overrides(&self, overrides: &[String]) -> Result<Self> {
        let text = toml::to_string(self).map_err(|e| ExperimentError::Config(e.to_string()))?;
        Self::from_toml_str(&text, overrides)
    }

    pub fn ensemble_id(&self) -> Result<EnsembleId> {
        self.ensemble
            .parse()
            .map_err(|_| ExperimentError::Config(format!("unknown ensemble `{}`", self.ensemble)))
    }

    pub fn memory_budget_bytes(&self) -> u64 {
        (self.memory_budget_gib * (1u64 << 30) as f64) as u64
    }

    /// Grids non-empty, counts positive, sizes within the dense caps and
    /// the memory budget.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        let id = self.experiment_id;
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if self.sizes.is_empty() {
            return bad("sizes is empty".into());
        }
        if self.alpha_grid.is_empty() || self.alpha_grid.iter().any(|a| !(*a >= 0.0)) {
            return bad("alpha_grid must be a non-empty list of α ≥ 0".into());
        }
        if self.epsilon.is_empty() || self.epsilon.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
            return bad("epsilon must be a non-empty list inside (0, 1)".into());
        }
        if self.depth_ratio.is_empty() || self.depth_ratio.iter().any(|r| !(*r >= 0.0)) {
            return bad("depth_ratio must be a non-empty list of r ≥ 0".into());
        }
        if self.k.is_empty() || self.k.contains(&0) {
            return bad("k must be a non-empty list of positive ranks".into());
        }
        if !(0.0..=1.0).contains(&self.p_t) {
            return bad(format!("p_t = {} outside [0, 1]", self.p_t));
        }
        if self.levels == 0 {
            return bad("levels must be at least 1".into());
        }
        if !(self.plateau_tol > 0.0) || !(self.max_depth_ratio > 0.0) {
            return bad("plateau_tol and max_depth_ratio must be positive".into());
        }
        if self.times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return bad("times must be finite and non-negative".into());
        }
        self.ensemble_id()?;
        for f in &self.families {
            if !["renyi", "overlap", "lemma"].contains(&f.as_str()) {
                return bad(format!("unknown bound family `{f}`"));
            }
        }
        for &l in &self.sizes {
            if l < 4 || l % 2 != 0 {
                return bad(format!("L = {l}: sizes must be even and at least 4"));
            }
        }
        let l_max = *self.sizes.iter().max().unwrap();
        if id.uses_gibbs(self) {
            if l_max > MAX_DENSE_SITES {
                return bad(format!(
                    "L = {l_max} exceeds the dense Gibbs cap of {MAX_DENSE_SITES} sites"
                ));
            }
            let need = estimated_bytes(l_max);
            if need > self.memory_budget_bytes() {
                return Err(ExperimentError::Budget(format!(
                    "L = {l_max} needs about {:.1} GiB, memory_budget_gib = {}",
                    need as f64 / (1u64 << 30) as f64,
                    self.memory_budget_gib
                )));
            }
        } else if l_max > MAX_CIRCUIT_SITES {
            return bad(format!(
                "L = {l_max} exceeds the circuit cap of {MAX_CIRCUIT_SITES} sites"
            ));
        }
        match id {
            ExperimentId::Fig7VolumeCoeff => {
                if self.beta_scan.is_empty() && self.theta_scan.is_empty() {
                    return bad(format!("{} needs beta_scan or theta_scan", self.experiment_id));
                }
                if self.sizes.len() < 3 {
                    return bad("volume coefficients need at least 3 sizes".into());
                }
            }
            ExperimentId::Fig8BthetaCollapse => {
                if self.beta_scan.is_empty() || self.theta_scan.is_empty() {
                    return bad(format!("{} needs beta_scan and theta_scan", self.experiment_id));
                }
                if self.sizes.len() != 1 {
                    return bad(format!("{} takes exactly one size", self.experiment_id));
                }
            }
            ExperimentId::Fig1Truncation => {
                if self.times.is_empty() {
                    return bad(format!("{} needs times", self.experiment_id));
                }
                if self.sizes.len() != 1 {
                    return bad(format!("{} takes exactly one size", self.experiment_id));
                }
            }
            ExperimentId::Fig6Timedep => {
                if self.times.is_empty() {
                    return bad(format!("{} needs times", self.experiment_id));
                }
                if self.model == Model::Circuit && self.times.iter().any(|t| t.fract() != 0.0) {
                    return bad("circuit times must be whole timesteps".into());
                }
            }
            _ => {}
        }
        for scan in [&self.beta_scan, &self.theta_scan] {
            if scan.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                return bad("scan grids must be positive".into());
            }
        }
        Ok(())
    }
}
