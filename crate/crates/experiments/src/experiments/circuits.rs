//! Hierarchy runs on perturbed circuit states.

use super::{renyi_rows, schmidt_rows};
use crate::config::ExperimentConfig;
use crate::records::{ResultSet, SampleFailure, ScalingRow};
use crate::runner::par_map;
use crate::{ExperimentError, Result};
use hent_circuits::{
    center_site, heisenberg_state, perturbed_state, sample_u1_initial_state, CircuitRealization,
    EnsembleId,
};
use hent_core::entropy::renyi_entropy;
use hent_core::fit::{least_squares_fit, mean_and_sem};
use hent_core::rng::{derive_stream, derive_u64};
use hent_core::{ProductState, PureState, Region};
use hent_spectra::{alpha_c_estimate, cut_weights, hierarchy, scrambled_alpha_c, RenyiCurve, SpikeCloud};
use std::collections::BTreeMap;

/// One perturbed circuit state `(|Φ⟩ + ε O(t)|Φ⟩)/√N`.
pub struct CircuitSample {
    pub l: usize,
    pub sample_id: usize,
    pub seed: u64,
    pub depth: usize,
    /// `O(t)|Φ⟩`.
    pub operator_state: PureState,
    pub state: PureState,
    /// `|Φ⟩`.
    pub base: ProductState,
}

/// Seed of sample `sample_id` at size `l`, shared by every `ε` and depth.
pub fn sample_seed(cfg: &ExperimentConfig, l: usize, sample_id: usize) -> u64 {
    derive_u64(
        cfg.master_seed,
        &[cfg.experiment_id.stream_code(), l as u64, sample_id as u64],
    )
}

pub fn depth_for(l: usize, r: f64) -> usize {
    (r * l as f64).round() as usize
}

pub fn circuit_sample(
    ensemble: EnsembleId,
    l: usize,
    sample_id: usize,
    seed: u64,
    epsilon: f64,
    depth: usize,
    p_t: f64,
) -> Result<CircuitSample> {
    let center = center_site(l);
    let base = match ensemble {
        EnsembleId::U1 => sample_u1_initial_state(l, center, &mut derive_stream(seed, &[1]))?,
        _ => ProductState::zero(l),
    };
    let base_pure = base.to_pure();
    let circuit = CircuitRealization::sample(ensemble, l, depth.max(1), seed, p_t)?;
    let operator_state = heisenberg_state(&circuit, center, &base_pure, depth)?;
    let state = perturbed_state(&operator_state, epsilon, &base_pure)?.state;
    Ok(CircuitSample {
        l,
        sample_id,
        seed,
        depth,
        operator_state,
        state,
        base,
    })
}

/// Levels that fit in an `l`-site chain when each halves the last.
pub fn feasible_levels(l: usize) -> usize {
    let mut m = l / 2;
    let mut j = 0;
    while m >= 1 {
        j += 1;
        m /= 2;
    }
    j
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlateauTrace {
    pub ratios: Vec<f64>,
    pub mean_s_half: Vec<f64>,
    pub converged: bool,
}

impl PlateauTrace {
    pub fn chosen(&self) -> f64 {
        *self.ratios.last().expect("at least one ratio")
    }
}

/// Doubles `r` from `depth_ratio[0]` until the sample mean of
/// `S_{1/2}(ρ_{A_{1/2}})` at the largest size changes by less than
/// `plateau_tol` relative to the previous ratio, or `max_depth_ratio` is
/// reached.
pub fn detect_plateau(cfg: &ExperimentConfig) -> Result<PlateauTrace> {
    let ensemble = cfg.ensemble_id()?;
    let l = *cfg.sizes.iter().max().expect("validated sizes");
    let eps = cfg.epsilon[0];
    let mut r = cfg.depth_ratio[0];
    if !(r > 0.0) {
        return Err(ExperimentError::Config(
            "plateau detection needs depth_ratio[0] > 0".into(),
        ));
    }
    let cut = Region::first_half(l)?;
    let samples: Vec<usize> = (0..cfg.samples).collect();
    let mut trace = PlateauTrace {
        ratios: Vec::new(),
        mean_s_half: Vec::new(),
        converged: false,
    };
    loop {
        let depth = depth_for(l, r);
        let values: Vec<Result<f64>> = par_map(&samples, |&s| {
            let cs = circuit_sample(ensemble, l, s, sample_seed(cfg, l, s), eps, depth, cfg.p_t)?;
            Ok(renyi_entropy(&cut_weights(&cs.state, &cut)?, 0.5)?)
        });
        let values: Vec<f64> = values.into_iter().collect::<Result<_>>()?;
        let (mean, _) = mean_and_sem(&values);
        if let Some(&prev) = trace.mean_s_half.last() {
            trace.ratios.push(r);
            trace.mean_s_half.push(mean);
            if (mean - prev).abs() <= cfg.plateau_tol * prev.abs() {
                trace.converged = true;
                return Ok(trace);
            }
        } else {
            trace.ratios.push(r);
            trace.mean_s_half.push(mean);
        }
        if 2.0 * r > cfg.max_depth_ratio {
            return Ok(trace);
        }
        r *= 2.0;
    }
}

struct SampleOut {
    l: usize,
    sample_id: usize,
    eps_index: usize,
    seed: u64,
    depth: usize,
    s2: f64,
    /// Primary `ε` only from here on.
    level_weights: Vec<Vec<f64>>,
    mu: Vec<f64>,
    contrast: Option<f64>,
}

/// Rényi entropies of the nested top Schmidt states for the configured
/// ensemble, with `μ` per level, the second-state contrast, `S₂` for every
/// `ε`, and the `α_c` estimate per level.
pub fn hierarchy_run(cfg: &ExperimentConfig) -> Result<ResultSet> {
    let ensemble = cfg.ensemble_id()?;
    let mut out = ResultSet::new(cfg.experiment_id);

    let r = if cfg.plateau {
        let trace = detect_plateau(cfg)?;
        for (&ratio, &s) in trace.ratios.iter().zip(&trace.mean_s_half) {
            out.scaling
                .push(ScalingRow::new("depth_ratio", ratio, 1, "plateau_mean_S_half", s));
        }
        out.notes
            .insert("plateau_converged".into(), trace.converged.to_string());
        out.notes
            .insert("depth_ratio".into(), trace.chosen().to_string());
        trace.chosen()
    } else {
        out.notes
            .insert("depth_ratio".into(), cfg.depth_ratio[0].to_string());
        cfg.depth_ratio[0]
    };

    let tasks: Vec<(usize, usize, usize)> = cfg
        .sizes
        .iter()
        .flat_map(|&l| {
            (0..cfg.samples)
                .flat_map(move |s| (0..cfg.epsilon.len()).map(move |e| (l, s, e)))
        })
        .collect();
    let results: Vec<Result<SampleOut>> = par_map(&tasks, |&(l, s, e)| {
        let seed = sample_seed(cfg, l, s);
        let depth = depth_for(l, r);
        let cs = circuit_sample(ensemble, l, s, seed, cfg.epsilon[e], depth, cfg.p_t)?;
        let cut = Region::first_half(l)?;
        let mut o = SampleOut {
            l,
            sample_id: s,
            eps_index: e,
            seed,
            depth,
            s2: 0.0,
            level_weights: Vec::new(),
            mu: Vec::new(),
            contrast: None,
        };
        if e != 0 {
            o.s2 = renyi_entropy(&cut_weights(&cs.state, &cut)?, 2.0)?;
            return Ok(o);
        }
        let depth_levels = cfg.levels.min(feasible_levels(l));
        let levels = hierarchy(&cs.state, &cut, &cs.base, depth_levels)?;
        o.s2 = levels[0].renyi(2.0)?;
        o.contrast = levels[0].second_state_contrast(2.0).unwrap_or_default();
        for lv in levels {
            o.mu.push(lv.mu);
            o.level_weights.push(lv.weights);
        }
        Ok(o)
    });

    let mut ok = Vec::new();
    for (res, &(l, s, _)) in results.into_iter().zip(&tasks) {
        match res {
            Ok(o) => ok.push(o),
            Err(e) => out.failures.push(SampleFailure {
                sample_id: s,
                l,
                message: e.to_string(),
            }),
        }
    }

    for o in ok.iter().filter(|o| o.eps_index == 0) {
        for (j0, w) in o.level_weights.iter().enumerate() {
            let t = o.depth as f64;
            out.renyi
                .extend(renyi_rows(w, &cfg.alpha_grid, o.sample_id, o.l, j0 + 1, t, o.seed)?);
            out.schmidt
                .extend(schmidt_rows(w, cfg.schmidt_ranks, o.sample_id, o.l, j0 + 1, t, o.seed));
        }
    }

    // μ per level and size
    let mut mu: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    let mut contrast: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for o in ok.iter().filter(|o| o.eps_index == 0) {
        for (j0, &m) in o.mu.iter().enumerate() {
            mu.entry((j0 + 1, o.l)).or_default().push(m);
        }
        if let Some(c) = o.contrast {
            contrast.entry(o.l).or_default().push(c);
        }
    }
    for (&(j, l), v) in &mu {
        let (m, sem) = mean_and_sem(v);
        out.scaling.push(ScalingRow::new("L", l as f64, j, "mu_mean", m));
        out.scaling.push(ScalingRow::new("L", l as f64, j, "mu_sem", sem));
    }
    for (&l, v) in &contrast {
        let (m, sem) = mean_and_sem(v);
        out.scaling
            .push(ScalingRow::new("L", l as f64, 2, "second_state_contrast_S2_mean", m));
        out.scaling
            .push(ScalingRow::new("L", l as f64, 2, "second_state_contrast_S2_sem", sem));
    }
    let max_level = mu.keys().map(|k| k.0).max().unwrap_or(0);
    for j in 1..=max_level {
        let pts: Vec<(f64, f64)> = mu
            .iter()
            .filter(|(k, _)| k.0 == j)
            .map(|(k, v)| (k.1 as f64, mean_and_sem(v).0))
            .filter(|p| p.1 > 0.0)
            .collect();
        if pts.len() >= 2 {
            let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
            if let Ok(fit) = least_squares_fit(&xs, &ys) {
                out.scaling.push(ScalingRow::new("level", j as f64, j, "mu_log_slope", fit.slope));
                out.scaling
                    .push(ScalingRow::new("level", j as f64, j, "mu_log_r_squared", fit.r_squared));
            }
        }
    }

    // S₂ of ρ_{A_{1/2}} for every ε against the closed-form ceiling
    for (e, &eps) in cfg.epsilon.iter().enumerate() {
        let bound = 2.0 * (1.0 / (1.0 - SpikeCloud::mu_infinity(eps))).ln();
        out.scaling.push(ScalingRow::new("epsilon", eps, 1, "S2_bound", bound));
        for &l in &cfg.sizes {
            let v: Vec<f64> = ok
                .iter()
                .filter(|o| o.eps_index == e && o.l == l)
                .map(|o| o.s2)
                .collect();
            if v.is_empty() {
                continue;
            }
            let (m, sem) = mean_and_sem(&v);
            out.scaling.push(ScalingRow::new("L", l as f64, 1, &format!("S2_mean[eps={eps}]"), m));
            out.scaling.push(ScalingRow::new("L", l as f64, 1, &format!("S2_sem[eps={eps}]"), sem));
        }
    }

    // α_c per level
    for j in 1..=max_level {
        let curves: Vec<RenyiCurve> = ok
            .iter()
            .filter(|o| o.eps_index == 0 && o.level_weights.len() >= j)
            .map(|o| {
                let entropies = cfg
                    .alpha_grid
                    .iter()
                    .map(|&a| renyi_entropy(&o.level_weights[j - 1], a))
                    .collect::<std::result::Result<Vec<f64>, _>>()?;
                Ok(RenyiCurve {
                    l: o.l,
                    j,
                    t: o.depth,
                    sample_id: o.sample_id,
                    alphas: cfg.alpha_grid.clone(),
                    entropies,
                })
            })
            .collect::<Result<_>>()?;
        let exact = scrambled_alpha_c(j as u32)?;
        out.scaling.push(ScalingRow::new(
            "level",
            j as f64,
            j,
            "alpha_c_scrambled",
            *exact.numer() as f64 / *exact.denom() as f64,
        ));
        match alpha_c_estimate(&curves, cfg.threshold) {
            Ok(est) => {
                for s in &est.slopes {
                    out.scaling
                        .push(ScalingRow::new("alpha", s.alpha, j, "entropy_slope", s.fit.slope));
                }
                out.scaling.push(ScalingRow::new(
                    "level",
                    j as f64,
                    j,
                    "alpha_c",
                    est.alpha_c.unwrap_or(f64::NAN),
                ));
                out.scaling.push(ScalingRow::new(
                    "level",
                    j as f64,
                    j,
                    "alpha_c_monotone",
                    if est.monotone { 1.0 } else { 0.0 },
                ));
            }
            Err(e) => {
                out.notes.insert(format!("alpha_c_level_{j}"), e.to_string());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_counts() {
        assert_eq!(feasible_levels(4), 2);
        assert_eq!(feasible_levels(10), 3);
        assert_eq!(feasible_levels(16), 4);
    }

    #[test]
    fn depths_round() {
        assert_eq!(depth_for(10, 2.0), 20);
        assert_eq!(depth_for(14, 0.25), 4);
        assert_eq!(depth_for(10, 0.0), 0);
    }
}
