//! Quenched Gibbs purification runs: truncation, saturated Rényi spectra,
//! volume-law coefficients and the small-parameter collapse.

use super::{renyi_rows, schmidt_rows};
use crate::config::{ExperimentConfig, ExperimentId};
use crate::records::{ResultSet, SampleFailure, ScalingRow};
use crate::runner::par_map;
use crate::{ExperimentError, Result};
use hent_core::entropy::renyi_entropy;
use hent_core::fit::log_log_fit;
use hent_core::Region;
use hent_gibbs::{
    exact_expectation, paired_vector_state, perturbative_rank_check, purification_schmidt,
    purification_schmidt_top, truncated_expectation_with, truncation_error, volume_coeff_fit,
    IsingEigen, IsingSpec, PauliString, QuenchRun, Regime,
};
use hent_spectra::{alpha_c_estimate, cut_weights, RenyiCurve};
use std::sync::Arc;

pub fn ising_eigen(cfg: &ExperimentConfig, l: usize) -> Result<Arc<IsingEigen>> {
    let spec = IsingSpec::new(l, cfg.g, cfg.h, cfg.boundary)?;
    Ok(Arc::new(IsingEigen::compute_with_budget(
        &spec,
        cfg.memory_budget_bytes(),
    )?))
}

/// `L^time_power`, or every configured time when `times` is set.
fn saturation_times(cfg: &ExperimentConfig, l: usize) -> Vec<f64> {
    if cfg.times.is_empty() {
        vec![(l as f64).powf(cfg.time_power)]
    } else {
        cfg.times.clone()
    }
}

fn operator(name: &str, a: &Region) -> Result<PauliString> {
    if name == "zstring" {
        Ok(PauliString::z_string(a.start(), a.len()))
    } else {
        Ok(PauliString::parse(name)?)
    }
}

fn single_size(cfg: &ExperimentConfig) -> Result<usize> {
    match cfg.sizes.as_slice() {
        [l] => Ok(*l),
        _ => Err(ExperimentError::Config(format!(
            "{} takes exactly one size",
            cfg.experiment_id
        ))),
    }
}

/// Exact and rank-`k` truncated expectation values over time, the leading
/// Schmidt weights at each time, and the small-`β` / small-`θ` truncation
/// scans with their log-log slopes.
pub fn truncation_run(cfg: &ExperimentConfig) -> Result<ResultSet> {
    let mut out = ResultSet::new(ExperimentId::Fig1Truncation);
    let l = single_size(cfg)?;
    let eig = ising_eigen(cfg, l)?;
    let a = Region::first_half(l)?;
    let ops: Vec<(String, PauliString)> = cfg
        .operators
        .iter()
        .map(|n| Ok((n.clone(), operator(n, &a)?)))
        .collect::<Result<_>>()?;
    let run = QuenchRun::new(eig.clone(), cfg.beta, cfg.theta)?;
    let k_max = *cfg.k.iter().max().unwrap();
    let keep = k_max.max(cfg.schmidt_ranks).min(a.dim() * a.dim());

    struct Point {
        weights: Vec<f64>,
        exact: Vec<f64>,
        truncated: Vec<Vec<f64>>,
    }
    let points = par_map(&cfg.times, |&t| -> Result<Point> {
        let p = run.purification(t);
        let spec = purification_schmidt_top(&p, &a, keep)?;
        let mut exact = Vec::new();
        let mut truncated = Vec::new();
        for (_, op) in &ops {
            exact.push(exact_expectation(&p, op)?.re);
            truncated.push(
                cfg.k
                    .iter()
                    .map(|&k| Ok(truncated_expectation_with(&spec, k, op)?.re))
                    .collect::<Result<Vec<f64>>>()?,
            );
        }
        Ok(Point {
            weights: spec.weights,
            exact,
            truncated,
        })
    });
    for (p, &t) in points.into_iter().zip(&cfg.times) {
        let p = match p {
            Ok(p) => p,
            Err(e) => {
                out.failures.push(SampleFailure {
                    sample_id: 0,
                    l,
                    message: format!("t = {t}: {e}"),
                });
                continue;
            }
        };
        out.schmidt
            .extend(schmidt_rows(&p.weights, keep, 0, l, 1, t, cfg.master_seed));
        for &k in &cfg.k {
            out.scaling.push(ScalingRow::new(
                "time",
                t,
                k,
                "truncation_error",
                truncation_error(&p.weights, k),
            ));
        }
        for (i, (name, _)) in ops.iter().enumerate() {
            out.scaling
                .push(ScalingRow::new("time", t, 0, &format!("expectation[{name}]"), p.exact[i]));
            for (ki, &k) in cfg.k.iter().enumerate() {
                out.scaling.push(ScalingRow::new(
                    "time",
                    t,
                    k,
                    &format!("expectation[{name}]"),
                    p.truncated[i][ki],
                ));
            }
        }
    }

    let t_scan = (l as f64).powf(cfg.time_power);
    let scans = [
        (
            "beta",
            &cfg.beta_scan,
            Regime::SmallBeta {
                theta: cfg.scan_theta,
            },
            cfg.scan_theta,
        ),
        (
            "theta",
            &cfg.theta_scan,
            Regime::SmallTheta {
                beta: cfg.scan_beta,
                k: Some(cfg.theta_scan_k).filter(|&k| k > 0),
            },
            cfg.scan_beta,
        ),
    ];
    for (name, grid, regime, fixed) in scans {
        if grid.is_empty() {
            continue;
        }
        match perturbative_rank_check(&eig, regime, grid, t_scan, &a) {
            Ok(rec) => {
                for (&x, &err) in rec.params.iter().zip(&rec.errors) {
                    out.scaling
                        .push(ScalingRow::new(name, x, rec.k, "truncation_error", err));
                }
                let scan = format!("{name}_scan");
                out.scaling
                    .push(ScalingRow::new(&scan, fixed, rec.k, "loglog_slope", rec.fit.slope));
                out.scaling.push(ScalingRow::new(
                    &scan,
                    fixed,
                    rec.k,
                    "loglog_r_squared",
                    rec.fit.r_squared,
                ));
                if let Some(d) = rec.thermal_rank {
                    out.scaling
                        .push(ScalingRow::new(&scan, fixed, rec.k, "thermal_rank", d as f64));
                }
            }
            Err(e) => out.failures.push(SampleFailure {
                sample_id: 0,
                l,
                message: format!("{name} scan: {e}"),
            }),
        }
    }
    Ok(out)
}

/// Saturated `S_α` of the purification across `A_s A_a | B_s B_a` (level 1)
/// and of its top Schmidt state across the halves of `A` (level 2), with
/// per-`α` slopes in `L` and the `α_c` estimate per level.
pub fn renyi_run(cfg: &ExperimentConfig) -> Result<ResultSet> {
    let mut out = ResultSet::new(ExperimentId::Fig3GibbsRenyi);
    let levels = cfg.levels.min(2);
    let mut curves: Vec<Vec<RenyiCurve>> = vec![Vec::new(); levels];
    for &l in &cfg.sizes {
        let eig = ising_eigen(cfg, l)?;
        let run = QuenchRun::new(eig, cfg.beta, cfg.theta)?;
        let a = Region::first_half(l)?;
        let times = saturation_times(cfg, l);
        let per_time = par_map(&times, |&t| -> Result<Vec<Vec<f64>>> {
            let p = run.purification(t);
            let mut w = vec![purification_schmidt(&p, &a)?.weights];
            if levels > 1 {
                let top = purification_schmidt_top(&p, &a, 1)?;
                let (state, cut) = paired_vector_state(&top, 0)?;
                w.push(cut_weights(&state, &cut)?);
            }
            Ok(w)
        });
        for (res, &t) in per_time.into_iter().zip(&times) {
            let ws = match res {
                Ok(ws) => ws,
                Err(e) => {
                    out.failures.push(SampleFailure {
                        sample_id: 0,
                        l,
                        message: format!("t = {t}: {e}"),
                    });
                    continue;
                }
            };
            for (j0, w) in ws.iter().enumerate() {
                let rows = renyi_rows(w, &cfg.alpha_grid, 0, l, j0 + 1, t, cfg.master_seed)?;
                if t == *times.last().unwrap() {
                    curves[j0].push(RenyiCurve {
                        l,
                        j: j0 + 1,
                        t: t as usize,
                        sample_id: 0,
                        alphas: cfg.alpha_grid.clone(),
                        entropies: rows.iter().map(|r| r.entropy_nats).collect(),
                    });
                }
                out.renyi.extend(rows);
                out.schmidt
                    .extend(schmidt_rows(w, cfg.schmidt_ranks, 0, l, j0 + 1, t, cfg.master_seed));
            }
        }
    }
    for (j0, c) in curves.iter().enumerate() {
        let j = j0 + 1;
        match alpha_c_estimate(c, cfg.threshold) {
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
            }
            Err(e) => {
                out.notes.insert(format!("alpha_c_level_{j}"), e.to_string());
            }
        }
    }
    Ok(out)
}

/// `S₁` of the half-chain paired cut at `t = L^time_power`, fitted linearly
/// in `L` at each scanned parameter; the `θ` scan subtracts the `θ = 0`
/// value at the same size. The coefficients are then fitted against the
/// parameter in log₂–log₂.
pub fn volume_run(cfg: &ExperimentConfig) -> Result<ResultSet> {
    let mut out = ResultSet::new(ExperimentId::Fig7VolumeCoeff);
    let eigs: Vec<Arc<IsingEigen>> = cfg
        .sizes
        .iter()
        .map(|&l| ising_eigen(cfg, l))
        .collect::<Result<_>>()?;
    let s1 = |eig: &Arc<IsingEigen>, beta: f64, theta: f64| -> Result<f64> {
        let l = eig.spec.l;
        let run = QuenchRun::new(eig.clone(), beta, theta)?;
        let p = run.purification((l as f64).powf(cfg.time_power));
        Ok(renyi_entropy(
            &purification_schmidt(&p, &Region::first_half(l)?)?.weights,
            1.0,
        )?)
    };

    #[derive(Clone, Copy)]
    enum Scan {
        Beta,
        Theta,
    }
    let mut tasks: Vec<(Scan, f64, usize)> = Vec::new();
    for (scan, grid) in [(Scan::Beta, &cfg.beta_scan), (Scan::Theta, &cfg.theta_scan)] {
        for &x in grid {
            for i in 0..eigs.len() {
                tasks.push((scan, x, i));
            }
        }
    }
    if !cfg.theta_scan.is_empty() {
        for i in 0..eigs.len() {
            tasks.push((Scan::Theta, 0.0, i));
        }
    }
    let values = par_map(&tasks, |&(scan, x, i)| match scan {
        Scan::Beta => s1(&eigs[i], x, cfg.scan_theta),
        Scan::Theta => s1(&eigs[i], cfg.scan_beta, x),
    });
    let mut table = Vec::with_capacity(tasks.len());
    for (v, &(scan, x, i)) in values.into_iter().zip(&tasks) {
        let name = match scan {
            Scan::Beta => "beta",
            Scan::Theta => "theta",
        };
        let l = cfg.sizes[i];
        let v = v?;
        out.scaling
            .push(ScalingRow::new(name, x, 0, &format!("S1_L{l}"), v));
        table.push((name, x, i, v));
    }
    let lookup = |name: &str, x: f64, i: usize| {
        table
            .iter()
            .find(|r| r.0 == name && r.1 == x && r.2 == i)
            .map(|r| r.3)
            .expect("every task produced a value")
    };
    for (name, grid, fixed) in [
        ("beta", &cfg.beta_scan, cfg.scan_theta),
        ("theta", &cfg.theta_scan, cfg.scan_beta),
    ] {
        if grid.is_empty() {
            continue;
        }
        let mut coeffs = Vec::new();
        for &x in grid.iter() {
            let ys: Vec<f64> = (0..eigs.len()).map(|i| lookup(name, x, i)).collect();
            let baseline: Option<Vec<f64>> =
                (name == "theta").then(|| (0..eigs.len()).map(|i| lookup("theta", 0.0, i)).collect());
            let fit = volume_coeff_fit(&cfg.sizes, &ys, baseline.as_deref())?;
            out.scaling
                .push(ScalingRow::new(name, x, 0, "volume_coeff", fit.slope));
            out.scaling
                .push(ScalingRow::new(name, x, 0, "volume_coeff_r_squared", fit.r_squared));
            coeffs.push(fit.slope);
        }
        let scan = format!("{name}_scan");
        match log_log_fit(grid, &coeffs, 2.0) {
            Ok(fit) => {
                out.scaling
                    .push(ScalingRow::new(&scan, fixed, 0, "volume_exponent", fit.slope));
                out.scaling.push(ScalingRow::new(
                    &scan,
                    fixed,
                    0,
                    "volume_exponent_r_squared",
                    fit.r_squared,
                ));
            }
            Err(e) => {
                out.notes.insert(format!("{scan}_exponent"), e.to_string());
                out.scaling
                    .push(ScalingRow::new(&scan, fixed, 0, "volume_exponent", f64::NAN));
            }
        }
    }
    Ok(out)
}

/// `ε_k` over the `β × θ` grid against `βθ`, with a log₂–log₂ slope per
/// `k`.
pub fn collapse_run(cfg: &ExperimentConfig) -> Result<ResultSet> {
    let mut out = ResultSet::new(ExperimentId::Fig8BthetaCollapse);
    let l = single_size(cfg)?;
    let eig = ising_eigen(cfg, l)?;
    let a = Region::first_half(l)?;
    let t = (l as f64).powf(cfg.time_power);
    let k_max = *cfg.k.iter().max().unwrap();
    let grid: Vec<(f64, f64)> = cfg
        .beta_scan
        .iter()
        .flat_map(|&b| cfg.theta_scan.iter().map(move |&th| (b, th)))
        .collect();
    let weights = par_map(&grid, |&(b, th)| -> Result<Vec<f64>> {
        let run = QuenchRun::new(eig.clone(), b, th)?;
        Ok(purification_schmidt_top(&run.purification(t), &a, k_max)?.weights)
    });
    let mut per_k: Vec<(Vec<f64>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); cfg.k.len()];
    for (w, &(b, th)) in weights.into_iter().zip(&grid) {
        let w = w?;
        for (ki, &k) in cfg.k.iter().enumerate() {
            let err = truncation_error(&w, k);
            out.scaling.push(ScalingRow::new(
                "beta_theta",
                b * th,
                k,
                &format!("truncation_error[beta={b},theta={th}]"),
                err,
            ));
            per_k[ki].0.push(b * th);
            per_k[ki].1.push(err);
        }
    }
    for (ki, &k) in cfg.k.iter().enumerate() {
        match log_log_fit(&per_k[ki].0, &per_k[ki].1, 2.0) {
            Ok(fit) => {
                out.scaling
                    .push(ScalingRow::new("k", k as f64, k, "collapse_slope", fit.slope));
                out.scaling
                    .push(ScalingRow::new("k", k as f64, k, "collapse_r_squared", fit.r_squared));
            }
            Err(e) => {
                out.notes.insert(format!("collapse_k{k}"), e.to_string());
                out.scaling
                    .push(ScalingRow::new("k", k as f64, k, "collapse_slope", f64::NAN));
            }
        }
    }
    Ok(out)
}
