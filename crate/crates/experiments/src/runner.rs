use crate::config::{ExperimentConfig, ExperimentId};
use crate::experiments;
use crate::records::{Manifest, ResultSet};
use crate::{ExperimentError, Result};
use rayon::prelude::*;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads; 0 uses rayon's default.
    pub threads: usize,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub results: ResultSet,
    pub output_dir: PathBuf,
    pub wall_time_seconds: f64,
}

/// Runs one experiment. Results do not depend on `opts.threads`.
pub fn run_experiment(config: &ExperimentConfig, opts: RunOptions) -> Result<ResultSet> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| ExperimentError::ThreadPool(e.to_string()))?;
    pool.install(|| match config.experiment_id {
        ExperimentId::Fig2HaarHierarchy | ExperimentId::Fig4CliffordT | ExperimentId::Fig5U1 => {
            experiments::circuits::hierarchy_run(config)
        }
        ExperimentId::Fig6Timedep => experiments::timedep::run(config),
        ExperimentId::Fig1Truncation => experiments::gibbs::truncation_run(config),
        ExperimentId::Fig3GibbsRenyi => experiments::gibbs::renyi_run(config),
        ExperimentId::Fig7VolumeCoeff => experiments::gibbs::volume_run(config),
        ExperimentId::Fig8BthetaCollapse => experiments::gibbs::collapse_run(config),
        ExperimentId::BoundsSuite => experiments::bounds::run(config),
    })
}

/// Runs and writes every CSV plus `manifest.json` into `config.output_dir`.
pub fn run_and_write(config: &ExperimentConfig, opts: RunOptions) -> Result<RunSummary> {
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();
    let results = run_experiment(config, opts)?;
    let wall = clock.elapsed().as_secs_f64();
    let dir = config.output_dir.clone();
    results.write_csv(&dir)?;
    let threads = if opts.threads == 0 {
        rayon::current_num_threads()
    } else {
        opts.threads
    };
    Manifest::new(config, &results, wall, started, threads).write(&dir)?;
    Ok(RunSummary {
        results,
        output_dir: dir,
        wall_time_seconds: wall,
    })
}

/// Maps `f` over `tasks` in parallel, keeping task order.
pub(crate) fn par_map<T: Sync, R: Send>(tasks: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    tasks.par_iter().map(f).collect()
}
