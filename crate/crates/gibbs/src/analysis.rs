//! Overlap, area-law and scaling analyses of quenched purifications.

use crate::paired::{purification_schmidt, purification_schmidt_top};
use crate::quench::{IsingEigen, QuenchRun};
use crate::{GibbsError, Result};
use hent_core::entropy::renyi_entropy;
use hent_core::fit::{least_squares_fit, log_log_fit, LinearFit};
use hent_core::schmidt::truncation_error;
use hent_core::{Region, C64};
use hent_spectra::{check_overlap_lemma, BoundRecord, BoundsReport};
use std::sync::Arc;

/// Weights of the unquenched purification above this count towards the
/// thermal rank `D`.
pub const THERMAL_RANK_CUTOFF: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapRecord {
    /// `tr(√ρ_β √ρ_{β,θ}(t))`.
    pub overlap: C64,
    /// `exp(−β ‖ΔH‖/2) = exp(−β |g sin θ|)`.
    pub lower_bound: f64,
}

pub fn overlap_with_unquenched(run: &QuenchRun, t: f64) -> Result<OverlapRecord> {
    let thermal = run.thermal_purification();
    let overlap = thermal.inner(&run.purification(t))?;
    Ok(OverlapRecord {
        overlap,
        lower_bound: (-0.5 * run.beta * run.delta_h_norm()).exp(),
    })
}

/// Checks, across the paired cut on `a`:
///
/// - `S_α(ψ) ≤ S_{1/2}(φ) − 2α/(α−1) ln|⟨φ|ψ⟩|` with the measured overlap,
/// - the same with the overlap replaced by its lower bound,
/// - `p₁(ψ) ≥ exp(−S_{1/2}(φ) − β‖ΔH‖)`,
/// - `|⟨φ|ψ⟩| ≥ exp(−β‖ΔH‖/2)`,
///
/// where `φ` purifies `ρ_β` and `ψ` purifies `ρ_{β,θ}(t)`. Grid points with
/// `α ≤ 1` are skipped.
pub fn area_law_bound_check(
    run: &QuenchRun,
    t: f64,
    a: &Region,
    alphas: &[f64],
) -> Result<BoundsReport> {
    let phi = run.thermal_purification();
    let psi = run.purification(t);
    let phi_w = purification_schmidt(&phi, a)?.weights;
    let psi_w = purification_schmidt(&psi, a)?.weights;
    let overlap = phi.inner(&psi)?.norm();
    let s_half = renyi_entropy(&phi_w, 0.5)?;
    let dh = run.delta_h_norm();
    let bound = (-0.5 * run.beta * dh).exp();

    let mut report = check_overlap_lemma(&psi_w, &phi_w, overlap, alphas)?;
    for &alpha in alphas.iter().filter(|&&x| x > 1.0) {
        let c = 2.0 * alpha / (alpha - 1.0);
        report.records.push(BoundRecord::check(
            "area_law_corollary",
            Some(alpha),
            renyi_entropy(&psi_w, alpha)?,
            s_half - c * bound.ln(),
        ));
    }
    report.records.push(BoundRecord::check(
        "large_schmidt_eigenvalue",
        None,
        (-s_half - run.beta * dh).exp(),
        psi_w[0],
    ));
    report.records.push(BoundRecord::check(
        "overlap_lower_bound",
        None,
        bound,
        overlap,
    ));
    Ok(report)
}

/// Least-squares `S₁(L) [− S₁⁰(L)] = s₁ L + c` over at least three sizes.
pub fn volume_coeff_fit(
    sizes: &[usize],
    s1: &[f64],
    baseline: Option<&[f64]>,
) -> Result<LinearFit> {
    if sizes.len() < 3 {
        return Err(GibbsError::InvalidArgument(format!(
            "{} sizes, need at least 3",
            sizes.len()
        )));
    }
    if s1.len() != sizes.len() || baseline.is_some_and(|b| b.len() != sizes.len()) {
        return Err(GibbsError::InvalidArgument("table lengths differ".into()));
    }
    let xs: Vec<f64> = sizes.iter().map(|&l| l as f64).collect();
    let ys: Vec<f64> = match baseline {
        Some(b) => s1.iter().zip(b).map(|(s, b)| s - b).collect(),
        None => s1.to_vec(),
    };
    Ok(least_squares_fit(&xs, &ys)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// Scan `β` at fixed `θ`, keeping one Schmidt state.
    SmallBeta { theta: f64 },
    /// Scan `θ` at fixed `β`, keeping `k` states, or the thermal rank `D`
    /// when `k` is `None`.
    SmallTheta { beta: f64, k: Option<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRecord {
    pub regime: Regime,
    pub params: Vec<f64>,
    pub errors: Vec<f64>,
    pub k: usize,
    /// Thermal rank at the fixed `β` (small-θ regime only).
    pub thermal_rank: Option<usize>,
    /// `log₂ ε_k` against `log₂ param`.
    pub fit: LinearFit,
}

/// Truncation error `ε_k` over `grid` at time `t` across the paired cut on
/// `a`, with its log-log slope.
pub fn perturbative_rank_check(
    eig: &Arc<IsingEigen>,
    regime: Regime,
    grid: &[f64],
    t: f64,
    a: &Region,
) -> Result<ScalingRecord> {
    if grid.len() < 3 {
        return Err(GibbsError::InvalidArgument(format!(
            "scan grid of {} points, need at least 3",
            grid.len()
        )));
    }
    let (k, thermal_rank) = match regime {
        Regime::SmallBeta { .. } => (1, None),
        Regime::SmallTheta { beta, k } => {
            let thermal = QuenchRun::new(eig.clone(), beta, 0.0)?.thermal_purification();
            let d = thermal_rank(&purification_schmidt(&thermal, a)?.weights);
            (k.unwrap_or(d), Some(d))
        }
    };
    let mut errors = Vec::with_capacity(grid.len());
    for &x in grid {
        let run = match regime {
            Regime::SmallBeta { theta } => QuenchRun::new(eig.clone(), x, theta)?,
            Regime::SmallTheta { beta, .. } => QuenchRun::new(eig.clone(), beta, x)?,
        };
        let top = purification_schmidt_top(&run.purification(t), a, k)?;
        errors.push(truncation_error(&top.weights, k));
    }
    let fit = log_log_fit(grid, &errors, 2.0)?;
    Ok(ScalingRecord {
        regime,
        params: grid.to_vec(),
        errors,
        k,
        thermal_rank,
        fit,
    })
}

/// Number of weights above [`THERMAL_RANK_CUTOFF`].
pub fn thermal_rank(weights: &[f64]) -> usize {
    weights
        .iter()
        .filter(|&&w| w > THERMAL_RANK_CUTOFF)
        .count()
        .max(1)
}
