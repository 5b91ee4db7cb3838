use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use villain::harness::output::{write_trials_csv, OutputFormat};
use villain::harness::verify;
use villain::harness::{emit_beam_pattern, emit_cdf, emit_results, run_campaign, simulate_trial, ScenarioConfig};
use villain::metrics::{angle_grid, beam_pattern};

#[derive(Parser)]
#[command(name = "villain", version, about = "Secret-pilot channel estimation and MISO downlink security simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured trials and write one record per trial.
    Scenario {
        #[arg(long)]
        config: PathBuf,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
    },
    /// Sweep the receive power of one trial's precoder over angle.
    BeamPattern {
        #[arg(long)]
        config: PathBuf,
        /// Angle grid in degrees as start:stop:step.
        #[arg(long, default_value = "0:180:0.25")]
        grid: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
    /// Monte Carlo campaign; writes the empirical CDF of the advantage.
    Cdf {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        /// `.json` writes the full campaign, anything else the CDF as CSV.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in property checks.
    Verify,
}

enum Failure {
    Config(String),
    Runtime(String),
}

fn load(path: &Path) -> Result<ScenarioConfig, Failure> {
    let cfg = ScenarioConfig::from_json_file(path).map_err(|e| Failure::Config(e.to_string()))?;
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Failure::Config(format!("grid must be start:stop:step, got {spec:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0 && stop >= start && start.is_finite() && stop.is_finite()) {
        return Err(bad());
    }
    Ok(angle_grid(start, stop, step))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Scenario { config, seed, out, format } => {
            let mut cfg = load(&config)?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            let res = run_campaign(&cfg);
            match out {
                Some(path) => emit_results(&res, format, &path).map_err(|e| Failure::Runtime(e.to_string()))?,
                None => {
                    let stdout = std::io::stdout().lock();
                    match format {
                        OutputFormat::Csv => write_trials_csv(&res, stdout).map_err(|e| Failure::Runtime(e.to_string()))?,
                        OutputFormat::Json => {
                            serde_json::to_writer_pretty(stdout, &res).map_err(|e| Failure::Runtime(e.to_string()))?
                        }
                    }
                }
            }
            eprintln!(
                "{} trials, {} excluded, fraction delta > 0 dB: {:.4}",
                res.summary.num_trials, res.summary.num_excluded, res.summary.fraction_positive
            );
            Ok(())
        }
        Command::BeamPattern { config, grid, out, trial } => {
            let cfg = load(&config)?;
            let angles = parse_grid(&grid)?;
            let artifacts = simulate_trial(&cfg, trial).map_err(|e| Failure::Runtime(e.to_string()))?;
            let pattern = beam_pattern(&artifacts.precoder, &cfg.geometry, &angles);
            emit_beam_pattern(&pattern, &out).map_err(|e| Failure::Runtime(e.to_string()))?;
            eprintln!("delta = {} dB", artifacts.metrics.delta_db);
            Ok(())
        }
        Command::Cdf { config, trials, out } => {
            let mut cfg = load(&config)?;
            if let Some(n) = trials {
                if n == 0 {
                    return Err(Failure::Config("--trials must be at least 1".into()));
                }
                cfg.num_trials = n;
            }
            let res = run_campaign(&cfg);
            let written = if out.extension().is_some_and(|e| e == "json") {
                emit_results(&res, OutputFormat::Json, &out)
            } else {
                emit_cdf(&res.cdf, &out)
            };
            written.map_err(|e| Failure::Runtime(e.to_string()))?;
            let median = res.summary.median_delta_db.map(|m| m.to_string()).unwrap_or_else(|| "n/a".into());
            eprintln!(
                "{} samples ({} excluded), median delta {median} dB, fraction delta > 0 dB {:.4}",
                res.summary.num_samples, res.summary.num_excluded, res.summary.fraction_positive
            );
            Ok(())
        }
        Command::Verify => {
            let outcomes = verify::run_all();
            let mut ok = true;
            for c in &outcomes {
                println!("[{}] {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                ok &= c.passed;
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Runtime("verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
