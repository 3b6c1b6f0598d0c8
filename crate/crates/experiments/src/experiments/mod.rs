//! Per-figure experiment bodies. Each returns a [`crate::ResultSet`] whose
//! row order depends only on the config.

pub mod bounds;
pub mod circuits;
pub mod gibbs;
pub mod timedep;

use crate::records::{RenyiRow, SchmidtRow};
use crate::Result;
use hent_core::entropy::renyi_entropy;

pub(crate) fn renyi_rows(
    weights: &[f64],
    alphas: &[f64],
    sample_id: usize,
    l: usize,
    level_j: usize,
    time: f64,
    seed: u64,
) -> Result<Vec<RenyiRow>> {
    alphas
        .iter()
        .map(|&alpha| {
            Ok(RenyiRow {
                sample_id,
                l,
                level_j,
                time,
                alpha,
                entropy_nats: renyi_entropy(weights, alpha)?,
                seed,
            })
        })
        .collect()
}

pub(crate) fn schmidt_rows(
    weights: &[f64],
    ranks: usize,
    sample_id: usize,
    l: usize,
    level_j: usize,
    time: f64,
    seed: u64,
) -> Vec<SchmidtRow> {
    weights
        .iter()
        .take(ranks)
        .enumerate()
        .map(|(i, &weight)| SchmidtRow {
            sample_id,
            l,
            level_j,
            time,
            rank: i + 1,
            weight,
            seed,
        })
        .collect()
}

/// Index of the grid value closest to `alpha`.
pub fn nearest_alpha(grid: &[f64], alpha: f64) -> Option<usize> {
    grid.iter()
        .enumerate()
        .min_by(|a, b| (a.1 - alpha).abs().total_cmp(&(b.1 - alpha).abs()))
        .map(|(i, _)| i)
}
