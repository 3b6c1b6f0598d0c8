//! Entropy growth curves.

use super::circuits::{circuit_sample, sample_seed};
use super::gibbs::ising_eigen;
use super::renyi_rows;
use crate::config::{ExperimentConfig, Model};
use crate::records::{ResultSet, SampleFailure};
use crate::runner::par_map;
use crate::Result;
use hent_core::Region;
use hent_gibbs::{purification_schmidt, QuenchRun};
use hent_spectra::cut_weights;

/// `S_α(ρ_{A_{1/2}})` at every configured time, for one circuit realization
/// per sample (circuits sharing a seed are prefixes of each other) or for
/// the quenched Gibbs purification.
pub fn run(cfg: &ExperimentConfig) -> Result<ResultSet> {
    let mut out = ResultSet::new(cfg.experiment_id);
    match cfg.model {
        Model::Circuit => {
            let ensemble = cfg.ensemble_id()?;
            let tasks: Vec<(usize, usize, usize)> = cfg
                .sizes
                .iter()
                .flat_map(|&l| {
                    (0..cfg.samples).flat_map(move |s| (0..cfg.times.len()).map(move |ti| (l, s, ti)))
                })
                .collect();
            let rows = par_map(&tasks, |&(l, s, ti)| {
                let seed = sample_seed(cfg, l, s);
                let t = cfg.times[ti];
                let cs = circuit_sample(ensemble, l, s, seed, cfg.epsilon[0], t as usize, cfg.p_t)?;
                let w = cut_weights(&cs.state, &Region::first_half(l)?)?;
                renyi_rows(&w, &cfg.alpha_grid, s, l, 1, t, seed)
            });
            for (r, &(l, s, _)) in rows.into_iter().zip(&tasks) {
                match r {
                    Ok(rows) => out.renyi.extend(rows),
                    Err(e) => out.failures.push(SampleFailure {
                        sample_id: s,
                        l,
                        message: e.to_string(),
                    }),
                }
            }
        }
        Model::Gibbs => {
            for &l in &cfg.sizes {
                let run = QuenchRun::new(ising_eigen(cfg, l)?, cfg.beta, cfg.theta)?;
                let a = Region::first_half(l)?;
                let rows = par_map(&cfg.times, |&t| {
                    let w = purification_schmidt(&run.purification(t), &a)?.weights;
                    renyi_rows(&w, &cfg.alpha_grid, 0, l, 1, t, cfg.master_seed)
                });
                for r in rows {
                    match r {
                        Ok(rows) => out.renyi.extend(rows),
                        Err(e) => out.failures.push(SampleFailure {
                            sample_id: 0,
                            l,
                            message: e.to_string(),
                        }),
                    }
                }
            }
        }
    }
    Ok(out)
}
