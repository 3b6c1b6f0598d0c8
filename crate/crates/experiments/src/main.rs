use clap::{Parser, Subcommand};
use hent::{registry, run_and_write, run_experiment, ExperimentConfig, ExperimentId, RunOptions};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hent", version, about = "Hierarchical entanglement experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override a config key, e.g. `--set sizes=[10,12]`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List registered experiments with their default parameters.
    List,
    /// Run the randomized inequality suite and report violations.
    CheckBounds {
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Also write the CSVs and manifest here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> hent::Result<ExitCode> {
    match cli.command {
        Command::List => {
            print!("{}", registry::listing());
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            config,
            mut overrides,
            seed,
            threads,
            out,
        } => {
            let text = std::fs::read_to_string(&config)?;
            if let Some(s) = seed {
                overrides.push(format!("master_seed={s}"));
            }
            if let Some(dir) = out {
                overrides.push(format!("output_dir={:?}", dir.display().to_string()));
            }
            let cfg = ExperimentConfig::from_toml_str(&text, &overrides)?;
            let summary = run_and_write(&cfg, RunOptions { threads })?;
            let r = &summary.results;
            println!(
                "{}: {} renyi, {} schmidt, {} scaling, {} bounds rows in {:.1} s -> {}",
                cfg.experiment_id,
                r.renyi.len(),
                r.schmidt.len(),
                r.scaling.len(),
                r.bounds.len(),
                summary.wall_time_seconds,
                summary.output_dir.display()
            );
            for f in &r.failures {
                eprintln!("sample {} (L = {}) failed: {}", f.sample_id, f.l, f.message);
            }
            Ok(if r.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::CheckBounds {
            instances,
            seed,
            threads,
            out,
        } => {
            let mut overrides = vec![format!("samples={instances}"), format!("master_seed={seed}")];
            if let Some(dir) = &out {
                overrides.push(format!("output_dir={:?}", dir.display().to_string()));
            }
            let cfg = ExperimentConfig::defaults_for(ExperimentId::BoundsSuite).with_overrides(&overrides)?;
            let results = if out.is_some() {
                run_and_write(&cfg, RunOptions { threads })?.results
            } else {
                run_experiment(&cfg, RunOptions { threads })?
            };
            let violations: Vec<_> = results.bounds.iter().filter(|b| !b.satisfied).collect();
            println!(
                "{} instances, {} checks, {} violations, {} failed instances",
                instances,
                results.bounds.len(),
                violations.len(),
                results.failures.len()
            );
            for v in &violations {
                println!(
                    "instance {} {}: lhs {:e} rhs {:e} margin {:e}",
                    v.instance_id, v.inequality_name, v.lhs, v.rhs, v.margin
                );
            }
            Ok(if violations.is_empty() && results.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
