//! Volume-law threshold in the Rényi index from entropy-vs-size data.

use crate::{Result, SpectraError};
use hent_core::fit::{least_squares_fit, LinearFit};
use num_rational::Ratio;
use std::collections::BTreeMap;

/// Default slope (nats per site) below which `S_α` counts as area law.
pub const SLOPE_THRESHOLD: f64 = 0.02;

/// Slope increases smaller than this are not flagged as non-monotone.
const MONOTONE_SLACK: f64 = 2e-3;

/// `S_α` over a fixed grid for one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct RenyiCurve {
    pub l: usize,
    pub j: usize,
    pub t: usize,
    pub sample_id: usize,
    pub alphas: Vec<f64>,
    pub entropies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSlope {
    pub alpha: f64,
    pub fit: LinearFit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCEstimate {
    /// Smallest grid `α` from which every slope is below the threshold;
    /// `None` if even the largest `α` grows.
    pub alpha_c: Option<f64>,
    pub threshold: f64,
    pub slopes: Vec<AlphaSlope>,
    /// Slopes do not decrease with `α` within a small slack.
    pub monotone: bool,
    /// System sizes used, ascending.
    pub sizes: Vec<usize>,
}

/// Fits the sample-mean `S_α` against `L` for each grid `α` and returns
/// the threshold estimate. Needs at least three distinct sizes and a common
/// `α` grid across all curves.
pub fn alpha_c_estimate(curves: &[RenyiCurve], threshold: f64) -> Result<AlphaCEstimate> {
    let Some(first) = curves.first() else {
        return Err(SpectraError::InsufficientData("no curves".into()));
    };
    let alphas = &first.alphas;
    if curves.iter().any(|c| &c.alphas != alphas || c.entropies.len() != alphas.len()) {
        return Err(SpectraError::InvalidArgument(
            "curves do not share an α grid".into(),
        ));
    }
    let mut by_size: BTreeMap<usize, Vec<&RenyiCurve>> = BTreeMap::new();
    for c in curves {
        by_size.entry(c.l).or_default().push(c);
    }
    if by_size.len() < 3 {
        return Err(SpectraError::InsufficientData(format!(
            "{} distinct sizes, need 3",
            by_size.len()
        )));
    }
    let sizes: Vec<usize> = by_size.keys().copied().collect();
    let xs: Vec<f64> = sizes.iter().map(|&l| l as f64).collect();

    let mut slopes = Vec::with_capacity(alphas.len());
    for (i, &alpha) in alphas.iter().enumerate() {
        let ys: Vec<f64> = by_size
            .values()
            .map(|group| group.iter().map(|c| c.entropies[i]).sum::<f64>() / group.len() as f64)
            .collect();
        slopes.push(AlphaSlope {
            alpha,
            fit: least_squares_fit(&xs, &ys)?,
        });
    }
    slopes.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));

    let monotone = slopes
        .windows(2)
        .all(|w| w[1].fit.slope <= w[0].fit.slope + MONOTONE_SLACK);
    let mut alpha_c = None;
    for s in slopes.iter().rev() {
        if s.fit.slope < threshold {
            alpha_c = Some(s.alpha);
        } else {
            break;
        }
    }
    Ok(AlphaCEstimate {
        alpha_c,
        threshold,
        slopes,
        monotone,
        sizes,
    })
}

/// `1/(2^j − 1)`, the threshold after `j` scrambled halvings.
pub fn scrambled_alpha_c(j: u32) -> Result<Ratio<u64>> {
    if j == 0 || j > 63 {
        return Err(SpectraError::InvalidArgument(format!(
            "level j = {j} outside 1..=63"
        )));
    }
    Ok(Ratio::new(1, (1u64 << j) - 1))
}
