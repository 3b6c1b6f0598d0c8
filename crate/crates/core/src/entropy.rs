use crate::{QStateError, Result};

/// Weights below this are dropped before taking logarithms.
pub const CLIP_FLOOR: f64 = 1e-14;

/// Allowed excess of `Σ w` over one.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// Rényi entropy `ln(Σ w^α) / (1 - α)` in nats, with the von Neumann limit
/// at `α = 1`.
///
/// Near `α = 1` the ratio is evaluated through `ln_1p`/`exp_m1` so that the
/// two sides of the limit join smoothly.
pub fn renyi_entropy(weights: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(QStateError::InvalidAlpha(alpha));
    }
    validate_weights(weights)?;
    let kept = weights.iter().copied().filter(|&w| w > CLIP_FLOOR);
    if alpha == 1.0 {
        return Ok(-kept.map(|w| w * w.ln()).sum::<f64>());
    }
    let d = alpha - 1.0;
    if d.abs() < 1e-3 {
        // w^α = w·exp(d ln w); Σ w^α - Σ w = Σ w·expm1(d ln w).
        let (mut sum_w, mut excess) = (0.0, 0.0);
        for w in kept {
            sum_w += w;
            excess += w * (d * w.ln()).exp_m1();
        }
        let s = sum_w.ln() + (excess / sum_w).ln_1p();
        return Ok(-s / d);
    }
    let s: f64 = kept.map(|w| w.powf(alpha)).sum();
    Ok(s.ln() / (1.0 - alpha))
}

fn validate_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(QStateError::InvalidWeights("empty spectrum".into()));
    }
    let mut sum = 0.0;
    for &w in weights {
        if !(w >= 0.0) || !w.is_finite() {
            return Err(QStateError::InvalidWeights(format!("weight {w}")));
        }
        sum += w;
    }
    if sum > 1.0 + WEIGHT_SUM_TOL {
        return Err(QStateError::InvalidWeights(format!("sum {sum}")));
    }
    Ok(())
}

/// Entropies on a whole α grid.
pub fn renyi_curve(weights: &[f64], alphas: &[f64]) -> Result<Vec<f64>> {
    alphas.iter().map(|&a| renyi_entropy(weights, a)).collect()
}

/// Binary entropy `-p ln p - (1-p) ln(1-p)` in nats.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// `{0.05, 0.10, …, 3.00} ∪ {1/7, 1/3, 1/2, 1}`, ascending and deduplicated.
pub fn standard_alpha_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (1..=60).map(|k| k as f64 / 20.0).collect();
    grid.extend([1.0 / 7.0, 1.0 / 3.0]);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}
