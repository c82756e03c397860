//! Repeated seeded experiments and their persisted outputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::benchmarks::BenchmarkSpec;
use crate::error::{Error, Result};
use crate::mitigation::{fit_scaling_rate, run_method, FitStatus, Method, ZneOutcome, MITIGATOR_LABEL};
use crate::seed::derive_seed;

use super::config::ExperimentConfig;
use super::plots;
use super::stats::{box_stats, BoxStats, RmseReport};

/// Seed of run `index`; every stream inside the run derives from it.
pub fn run_seed(master_seed: u64, index: usize) -> u64 {
    derive_seed(&[master_seed, index as u64])
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run: usize,
    pub method: Method,
    pub seed: u64,
    /// Pipeline errors are kept as text so the batch can continue.
    pub outcome: std::result::Result<ZneOutcome, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: Method,
    pub completed: usize,
    pub failed: usize,
    pub fallback_fits: usize,
    pub box_stats: Option<BoxStats>,
    pub rmse: Option<RmseReport>,
    pub shots_per_run: u64,
    pub total_shots: u64,
    /// Every completed run consumed exactly `shots_per_run` shots.
    pub shot_accounting_ok: bool,
    pub errors: Vec<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub benchmark: String,
    pub num_qubits: usize,
    pub ideal: f64,
    pub master_seed: u64,
    pub runs: usize,
    pub noise_model: String,
    pub readout_mitigator: Option<&'static str>,
    pub methods: Vec<MethodSummary>,
    /// Fitted `a2` of the mean `ε(λ)/ε(1)` ratios, when IC-ZNE ran over
    /// at least two scaling factors.
    pub scaling_rate: Option<f64>,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone)]
pub struct ExperimentResults {
    pub config: ExperimentConfig,
    pub benchmark: BenchmarkSpec,
    pub records: Vec<RunRecord>,
    pub summary: Summary,
}

impl ExperimentResults {
    pub fn method(&self, method: Method) -> Option<&MethodSummary> {
        self.summary.methods.iter().find(|m| m.method == method)
    }

    pub fn rmse(&self, method: Method) -> Option<f64> {
        self.method(method)?.rmse.as_ref().map(|r| r.rmse)
    }

    pub fn median(&self, method: Method) -> Option<f64> {
        self.method(method)?.box_stats.as_ref().map(|b| b.median)
    }

    /// Extrapolated values of the completed runs of `method`.
    pub fn values(&self, method: Method) -> Vec<f64> {
        self.outcomes(method).map(|o| o.value).collect()
    }

    pub fn outcomes(&self, method: Method) -> impl Iterator<Item = &ZneOutcome> {
        self.records.iter().filter(move |r| r.method == method).filter_map(|r| r.outcome.as_ref().ok())
    }
}

/// Runs every enabled method `cfg.runs` times on a pool of `jobs` workers
/// (0 picks the rayon default). Results do not depend on `jobs`.
pub fn run_experiment(cfg: &ExperimentConfig, jobs: usize) -> Result<ExperimentResults> {
    cfg.validate()?;
    let bench = cfg.benchmark.spec();
    let q = bench.circuit.num_qubits();
    let nm = cfg.noise_model(q)?;
    let zcfg = cfg.zne_config(q);

    let tasks: Vec<(usize, Method)> =
        (0..cfg.runs).flat_map(|i| cfg.methods.iter().map(move |&m| (i, m))).collect();
    let execute = |&(run, method): &(usize, Method)| {
        let seed = run_seed(cfg.master_seed, run);
        let outcome =
            run_method(method, &bench.circuit, &bench.observable, &nm, &zcfg, seed).map_err(|e| e.to_string());
        RunRecord { run, method, seed, outcome }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let mut records: Vec<RunRecord> = pool.install(|| tasks.par_iter().map(execute).collect());
    records.sort_by_key(|r| (r.run, r.method));

    let mut methods = Vec::new();
    for &method in &cfg.methods {
        let mine: Vec<&RunRecord> = records.iter().filter(|r| r.method == method).collect();
        let ok: Vec<&ZneOutcome> = mine.iter().filter_map(|r| r.outcome.as_ref().ok()).collect();
        let values: Vec<f64> = ok.iter().map(|o| o.value).filter(|v| v.is_finite()).collect();
        let budget = zcfg.shot_budget(method);
        methods.push(MethodSummary {
            method,
            completed: ok.len(),
            failed: mine.len() - ok.len(),
            fallback_fits: ok.iter().filter(|o| o.status == FitStatus::Fallback).count(),
            box_stats: if values.is_empty() { None } else { Some(box_stats(&values)?) },
            rmse: if values.is_empty() { None } else { Some(RmseReport::new(&values, bench.ideal_value)?) },
            shots_per_run: budget,
            total_shots: ok.iter().map(|o| o.shots_used()).sum(),
            shot_accounting_ok: ok.iter().all(|o| o.shots_used() == budget),
            errors: mine.iter().filter_map(|r| r.outcome.as_ref().err().map(|e| (r.run, e.clone()))).collect(),
        });
    }

    let scaling_rate = {
        let ratios = mean_epsilon_ratios(records.iter().filter(|r| r.method == Method::Iczne));
        if ratios.len() >= 2 { fit_scaling_rate(&ratios).ok() } else { None }
    };

    let summary = Summary {
        benchmark: cfg.benchmark.to_string(),
        num_qubits: q,
        ideal: bench.ideal_value,
        master_seed: cfg.master_seed,
        runs: cfg.runs,
        noise_model: nm.label.clone(),
        readout_mitigator: (cfg.readout_mitigation && cfg.readout.is_some()).then_some(MITIGATOR_LABEL),
        methods,
        scaling_rate,
        config: cfg.clone(),
    };
    Ok(ExperimentResults { config: cfg.clone(), benchmark: bench, records, summary })
}

/// `(λ, mean ε(λ) / mean ε(1))` over all IC-ZNE points of `records`.
/// Empty when `λ = 1` is missing or its mean error strength is zero.
pub fn mean_epsilon_ratios<'a>(records: impl Iterator<Item = &'a RunRecord>) -> Vec<(f64, f64)> {
    let mut sums: BTreeMap<u32, (f64, usize)> = BTreeMap::new();
    for r in records {
        if let Ok(o) = &r.outcome {
            for p in &o.points {
                if let Some(e) = p.epsilon {
                    let s = sums.entry(p.lambda).or_default();
                    s.0 += e;
                    s.1 += 1;
                }
            }
        }
    }
    let base = match sums.get(&1) {
        Some(&(s, n)) if s > 0.0 => s / n as f64,
        _ => return Vec::new(),
    };
    sums.iter().map(|(&l, &(s, n))| (l as f64, s / n as f64 / base)).collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Per-point records as CSV text, one line per data point; failed runs
/// get a single line with status `failed`.
pub fn runs_csv(records: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(["run", "method", "lambda", "twirl_id", "shots", "expval", "p0", "epsilon", "fit_value", "fit_std", "status"])
        .map_err(csv_err)?;
    for r in records {
        match &r.outcome {
            Ok(o) => {
                let mut points: Vec<_> = o.points.iter().collect();
                points.sort_by_key(|p| (p.lambda, p.twirl_id));
                for p in points {
                    w.write_record([
                        r.run.to_string(),
                        r.method.to_string(),
                        p.lambda.to_string(),
                        p.twirl_id.to_string(),
                        p.shots.to_string(),
                        p.expval.to_string(),
                        opt(p.p0),
                        opt(p.epsilon),
                        o.value.to_string(),
                        o.std.to_string(),
                        o.status.name().to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
            Err(_) => {
                let mut row = vec![String::new(); 11];
                row[0] = r.run.to_string();
                row[1] = r.method.to_string();
                row[10] = "failed".into();
                w.write_record(&row).map_err(csv_err)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Writes `runs.csv`, `summary.json` and the SVG plots under `dir`;
/// returns the paths written.
pub fn write_outputs(results: &ExperimentResults, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files: Vec<(PathBuf, String)> = vec![
        (dir.join("runs.csv"), runs_csv(&results.records)?),
        (dir.join("summary.json"), serde_json::to_string_pretty(&results.summary)? + "\n"),
    ];
    for (name, svg) in plots::emit_plots(results) {
        files.push((dir.join(name), svg));
    }
    for (path, text) in &files {
        fs::write(path, text).map_err(|e| Error::io(path, e))?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::NoiseSpec;
    use crate::mitigation::estimate_epsilon;

    fn small(noise: NoiseSpec) -> ExperimentConfig {
        ExperimentConfig { noise, runs: 3, twirl_count: 2, shots_per_circuit: 200, master_seed: 11, ..Default::default() }
    }

    #[test]
    fn noiseless_reports_ideal() {
        let cfg = ExperimentConfig { runs: 1, ..small(NoiseSpec::Noiseless) };
        let res = run_experiment(&cfg, 1).unwrap();
        for m in &res.summary.methods {
            assert_eq!(m.completed, 1);
            assert!(m.rmse.as_ref().unwrap().rmse < 1e-9, "{:?}", m);
        }
    }

    #[test]
    fn csv_rows_rederive_epsilon() {
        let res = run_experiment(&small(NoiseSpec::Standard { cx_rate: 0.02 }), 2).unwrap();
        let text = runs_csv(&res.records).unwrap();
        let q = res.summary.num_qubits;
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let mut checked = 0;
        for row in rdr.records() {
            let row = row.unwrap();
            if !row[6].is_empty() {
                let p0: f64 = row[6].parse().unwrap();
                let eps: f64 = row[7].parse().unwrap();
                assert_eq!(estimate_epsilon(p0, q).unwrap().epsilon, eps);
                checked += 1;
            }
        }
        assert_eq!(checked, 3 * 3 * 2);
        assert!(res.summary.methods.iter().all(|m| m.shot_accounting_ok));
    }

    #[test]
    fn failed_records_are_flagged() {
        let cfg = small(NoiseSpec::Calibration { file: "/nonexistent/cx.csv".into(), layout: None });
        assert!(run_experiment(&cfg, 1).is_err());
        let rec = vec![RunRecord { run: 0, method: Method::Szne, seed: 0, outcome: Err("boom".into()) }];
        let text = runs_csv(&rec).unwrap();
        assert!(text.lines().nth(1).unwrap().ends_with("failed"));
    }
}
