//! Batch experiments: configuration, repeated seeded runs, statistics and
//! persisted CSV, JSON and SVG outputs.

mod config;
mod plots;
mod run;
mod stats;

pub use config::{chain_adjacency, ExperimentConfig, NoiseSpec, Spectators, DEFAULT_CALIBRATION_LAYOUT};
pub use plots::{box_svg, emit_plots, scaling_svg, scatter_svg};
pub use run::{
    mean_epsilon_ratios, run_experiment, run_seed, runs_csv, write_outputs, ExperimentResults, MethodSummary,
    RunRecord, Summary,
};
pub use stats::{box_stats, quantile_sorted, rmse, BoxStats, RmseReport};
