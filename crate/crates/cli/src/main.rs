use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use zne_core::circuit::{fold_cnots, serialize_circuit};
use zne_core::harness::{run_experiment, write_outputs, ExperimentConfig};
use zne_core::noise::Calibration;
use zne_core::{BenchmarkName, Error};

#[derive(Parser)]
#[command(name = "zne", version, about = "Zero-noise extrapolation experiments on a density-matrix simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `out_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Benchmark circuits.
    Circuits {
        #[command(subcommand)]
        command: CircuitsCommand,
    },
    /// Device calibration tables.
    Calib {
        #[command(subcommand)]
        command: CalibCommand,
    },
}

#[derive(Subcommand)]
enum CircuitsCommand {
    /// Print a benchmark circuit in the text format.
    Emit {
        benchmark: BenchmarkName,
        /// Odd noise scaling factor applied by CNOT folding.
        #[arg(long, default_value_t = 1)]
        fold: i64,
    },
}

#[derive(Subcommand)]
enum CalibCommand {
    /// Parse a `pair,gate_error` CSV and print its rates and statistics as JSON.
    Import { csv: PathBuf },
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run { config, out, jobs } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let dir = out
                .or_else(|| cfg.out_dir.clone())
                .ok_or_else(|| Error::InvalidArgument("no output directory: pass --out or set out_dir".into()))?;
            let results = run_experiment(&cfg, jobs)?;
            for p in write_outputs(&results, &dir)? {
                eprintln!("wrote {}", p.display());
            }
            println!("{:<6} {:>9} {:>6} {:>12} {:>12}", "method", "completed", "failed", "median", "rmse");
            for m in &results.summary.methods {
                let median = m.box_stats.as_ref().map(|b| format!("{:.6}", b.median)).unwrap_or_else(|| "-".into());
                let rmse = m.rmse.as_ref().map(|r| format!("{:.6}", r.rmse)).unwrap_or_else(|| "-".into());
                println!("{:<6} {:>9} {:>6} {:>12} {:>12}", m.method, m.completed, m.failed, median, rmse);
            }
            println!("ideal {}", results.summary.ideal);
        }
        Command::Circuits { command: CircuitsCommand::Emit { benchmark, fold } } => {
            let spec = benchmark.spec();
            let c = fold_cnots(&spec.circuit, fold)?;
            print!("{}", serialize_circuit(&c));
        }
        Command::Calib { command: CalibCommand::Import { csv } } => {
            let cal = Calibration::from_path(&csv)?;
            cal.noise_model()?;
            let rates: serde_json::Map<String, serde_json::Value> =
                cal.rates().iter().map(|(&(c, t), &r)| (format!("{c}_{t}"), json!(r))).collect();
            let report = json!({
                "pairs": cal.len(),
                "median": cal.median(),
                "min": cal.min(),
                "max": cal.max(),
                "rates": rates,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
