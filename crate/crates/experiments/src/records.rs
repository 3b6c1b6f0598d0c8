//! Result rows, their CSV schemas and the run manifest.

use crate::config::{ExperimentConfig, ExperimentId};
use crate::{ExperimentError, Result};
use hent_core::fit::mean_and_sem;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

pub const RENYI_COLUMNS: [&str; 8] = [
    "experiment_id",
    "sample_id",
    "L",
    "level_j",
    "time",
    "alpha",
    "entropy_nats",
    "seed",
];
pub const SCHMIDT_COLUMNS: [&str; 8] = [
    "experiment_id",
    "sample_id",
    "L",
    "level_j",
    "time",
    "rank",
    "weight",
    "seed",
];
pub const SCALING_COLUMNS: [&str; 5] = ["param_name", "param_value", "k_or_level", "metric", "value"];
pub const BOUNDS_COLUMNS: [&str; 6] = [
    "instance_id",
    "inequality_name",
    "lhs",
    "rhs",
    "margin",
    "satisfied",
];
pub const SUMMARY_COLUMNS: [&str; 8] = [
    "experiment_id",
    "L",
    "level_j",
    "time",
    "alpha",
    "mean_nats",
    "sem_nats",
    "samples",
];

/// 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenyiRow {
    pub sample_id: usize,
    pub l: usize,
    pub level_j: usize,
    pub time: f64,
    pub alpha: f64,
    pub entropy_nats: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtRow {
    pub sample_id: usize,
    pub l: usize,
    pub level_j: usize,
    pub time: f64,
    /// One-based.
    pub rank: usize,
    pub weight: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub param_name: String,
    pub param_value: f64,
    pub k_or_level: usize,
    pub metric: String,
    pub value: f64,
}

impl ScalingRow {
    pub fn new(param_name: &str, param_value: f64, k_or_level: usize, metric: &str, value: f64) -> Self {
        Self {
            param_name: param_name.into(),
            param_value,
            k_or_level,
            metric: metric.into(),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub instance_id: usize,
    pub inequality_name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub l: usize,
    pub level_j: usize,
    pub time: f64,
    pub alpha: f64,
    pub mean_nats: f64,
    pub sem_nats: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleFailure {
    pub sample_id: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub message: String,
}

/// Everything one run produced, in deterministic order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultSet {
    pub experiment_id: ExperimentId,
    pub renyi: Vec<RenyiRow>,
    pub schmidt: Vec<SchmidtRow>,
    pub scaling: Vec<ScalingRow>,
    pub bounds: Vec<BoundsRow>,
    pub failures: Vec<SampleFailure>,
    /// Free-form notes echoed into the manifest.
    pub notes: BTreeMap<String, String>,
}

impl ResultSet {
    pub fn new(experiment_id: ExperimentId) -> Self {
        Self {
            experiment_id,
            renyi: Vec::new(),
            schmidt: Vec::new(),
            scaling: Vec::new(),
            bounds: Vec::new(),
            failures: Vec::new(),
            notes: BTreeMap::new(),
        }
    }

    pub fn scaling_value(&self, param_name: &str, k_or_level: usize, metric: &str) -> Option<f64> {
        self.scaling
            .iter()
            .find(|r| r.param_name == param_name && r.k_or_level == k_or_level && r.metric == metric)
            .map(|r| r.value)
    }

    /// Sample mean and standard error of every `(L, j, t, α)` group.
    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut groups: BTreeMap<(usize, usize, u64, u64), Vec<f64>> = BTreeMap::new();
        for r in &self.renyi {
            groups
                .entry((r.l, r.level_j, r.time.to_bits(), r.alpha.to_bits()))
                .or_default()
                .push(r.entropy_nats);
        }
        let mut rows: Vec<SummaryRow> = groups
            .into_iter()
            .map(|((l, level_j, t, a), v)| {
                let (mean, sem) = mean_and_sem(&v);
                SummaryRow {
                    l,
                    level_j,
                    time: f64::from_bits(t),
                    alpha: f64::from_bits(a),
                    mean_nats: mean,
                    sem_nats: sem,
                    samples: v.len(),
                }
            })
            .collect();
        rows.sort_by(|x, y| {
            (x.l, x.level_j)
                .cmp(&(y.l, y.level_j))
                .then(x.time.total_cmp(&y.time))
                .then(x.alpha.total_cmp(&y.alpha))
        });
        rows
    }

    pub fn bound_violations(&self) -> usize {
        self.bounds.iter().filter(|b| !b.satisfied).count()
    }

    /// Writes `renyi.csv`, `schmidt.csv`, `scaling.csv`, `bounds.csv` and
    /// `renyi_summary.csv` into `dir`, headers included even when empty.
    pub fn write_csv(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let id = self.experiment_id.as_str();

        let mut w = csv::Writer::from_path(dir.join("renyi.csv"))?;
        w.write_record(RENYI_COLUMNS)?;
        for r in &self.renyi {
            w.write_record([
                id.to_string(),
                r.sample_id.to_string(),
                r.l.to_string(),
                r.level_j.to_string(),
                fmt_float(r.time),
                fmt_float(r.alpha),
                fmt_float(r.entropy_nats),
                r.seed.to_string(),
            ])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_path(dir.join("schmidt.csv"))?;
        w.write_record(SCHMIDT_COLUMNS)?;
        for r in &self.schmidt {
            w.write_record([
                id.to_string(),
                r.sample_id.to_string(),
                r.l.to_string(),
                r.level_j.to_string(),
                fmt_float(r.time),
                r.rank.to_string(),
                fmt_float(r.weight),
                r.seed.to_string(),
            ])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_path(dir.join("scaling.csv"))?;
        w.write_record(SCALING_COLUMNS)?;
        for r in &self.scaling {
            w.write_record([
                r.param_name.clone(),
                fmt_float(r.param_value),
                r.k_or_level.to_string(),
                r.metric.clone(),
                fmt_float(r.value),
            ])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_path(dir.join("bounds.csv"))?;
        w.write_record(BOUNDS_COLUMNS)?;
        for r in &self.bounds {
            w.write_record([
                r.instance_id.to_string(),
                r.inequality_name.clone(),
                fmt_float(r.lhs),
                fmt_float(r.rhs),
                fmt_float(r.margin),
                r.satisfied.to_string(),
            ])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_path(dir.join("renyi_summary.csv"))?;
        w.write_record(SUMMARY_COLUMNS)?;
        for r in self.summary() {
            w.write_record([
                id.to_string(),
                r.l.to_string(),
                r.level_j.to_string(),
                fmt_float(r.time),
                fmt_float(r.alpha),
                fmt_float(r.mean_nats),
                fmt_float(r.sem_nats),
                r.samples.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub experiment_id: ExperimentId,
    pub config: &'a ExperimentConfig,
    pub code_version: String,
    pub wall_time_seconds: f64,
    pub started_unix_seconds: u64,
    pub threads: usize,
    pub row_counts: BTreeMap<&'static str, usize>,
    pub failures: &'a [SampleFailure],
    pub notes: &'a BTreeMap<String, String>,
}

impl<'a> Manifest<'a> {
    pub fn new(
        config: &'a ExperimentConfig,
        results: &'a ResultSet,
        wall_time_seconds: f64,
        started_unix_seconds: u64,
        threads: usize,
    ) -> Self {
        let row_counts = BTreeMap::from([
            ("renyi", results.renyi.len()),
            ("schmidt", results.schmidt.len()),
            ("scaling", results.scaling.len()),
            ("bounds", results.bounds.len()),
        ]);
        Self {
            experiment_id: config.experiment_id,
            config,
            code_version: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            wall_time_seconds,
            started_unix_seconds,
            threads,
            row_counts,
            failures: &results.failures,
            notes: &results.notes,
        }
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let text = serde_json::to_string_pretty(self)?;
        fs::write(dir.join("manifest.json"), text + "\n")?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cell {
    Text,
    Unsigned,
    Float,
    Bool,
}

fn schema(file: &str) -> Option<(&'static [&'static str], &'static [Cell])> {
    use Cell::*;
    Some(match file {
        "renyi.csv" => (&RENYI_COLUMNS, &[Text, Unsigned, Unsigned, Unsigned, Float, Float, Float, Unsigned]),
        "schmidt.csv" => (&SCHMIDT_COLUMNS, &[Text, Unsigned, Unsigned, Unsigned, Float, Unsigned, Float, Unsigned]),
        "scaling.csv" => (&SCALING_COLUMNS, &[Text, Float, Unsigned, Text, Float]),
        "bounds.csv" => (&BOUNDS_COLUMNS, &[Unsigned, Text, Float, Float, Float, Bool]),
        "renyi_summary.csv" => (&SUMMARY_COLUMNS, &[Text, Unsigned, Unsigned, Float, Float, Float, Float, Unsigned]),
        _ => return None,
    })
}

/// Checks the header and the type of every cell of one of the output files;
/// returns the number of data rows.
pub fn validate_csv(path: &Path) -> Result<usize> {
    let name = path
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or_default()
        .to_string();
    let (columns, cells) =
        schema(&name).ok_or_else(|| ExperimentError::Schema(format!("no schema for `{name}`")))?;
    let mut rdr = csv::Reader::from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != columns {
        return Err(ExperimentError::Schema(format!(
            "{name}: header {header:?}, expected {columns:?}"
        )));
    }
    let mut rows = 0;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != columns.len() {
            return Err(ExperimentError::Schema(format!("{name} row {}: {} cells", i + 1, rec.len())));
        }
        for ((cell, kind), col) in rec.iter().zip(cells).zip(columns) {
            let ok = match kind {
                Cell::Text => !cell.is_empty(),
                Cell::Unsigned => cell.parse::<u64>().is_ok(),
                Cell::Float => cell.parse::<f64>().is_ok(),
                Cell::Bool => cell == "true" || cell == "false",
            };
            if !ok {
                return Err(ExperimentError::Schema(format!(
                    "{name} row {}: column `{col}` holds `{cell}`",
                    i + 1
                )));
            }
        }
        rows += 1;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(2.0), "2.0000000000000000e0");
        for x in [std::f64::consts::PI, 1e-300, -7.25e12] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn summary_groups_samples() {
        let mut rs = ResultSet::new(ExperimentId::Fig2HaarHierarchy);
        for (s, v) in [(0, 1.0), (1, 3.0)] {
            rs.renyi.push(RenyiRow {
                sample_id: s,
                l: 10,
                level_j: 1,
                time: 20.0,
                alpha: 2.0,
                entropy_nats: v,
                seed: 9,
            });
        }
        let sum = rs.summary();
        assert_eq!(sum.len(), 1);
        assert_eq!((sum[0].mean_nats, sum[0].samples), (2.0, 2));
        assert!((sum[0].sem_nats - 1.0).abs() < 1e-12);
    }
}
