//! Standard ZNE and inverted-circuit ZNE pipelines.
//!
//! Every random stream is seeded from `(seed, method, λ, twirl id, stage)`
//! so versions can be evaluated in any order with identical results.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{fold_cnots, invert, twirl, Adjacency, Circuit, Observable};
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::seed::{rng_from, stage, SimRng};
use crate::simulator::{exact_distribution, run_exact, sample_counts, MeasurementCounts};

use super::epsilon::estimate_epsilon;
use super::fit::{fit_exponential_or_linear, fit_linear, FitResult};
use super::readout::readout_mitigate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Raw,
    Szne,
    Iczne,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Raw, Method::Szne, Method::Iczne];

    pub fn tag(self) -> u64 {
        match self {
            Method::Raw => 1,
            Method::Szne => 2,
            Method::Iczne => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Raw => "raw",
            Method::Szne => "szne",
            Method::Iczne => "iczne",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "raw" => Ok(Method::Raw),
            "szne" => Ok(Method::Szne),
            "iczne" | "ic-zne" => Ok(Method::Iczne),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    /// Finite shots drawn from the simulated distribution.
    Sampled,
    /// Exact outcome probabilities, as if infinitely many shots were taken.
    Exact,
}

/// How the inverted circuit of an IC-ZNE version is randomized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InverseTwirl {
    /// Twirl `U·U†` as a whole with fresh Paulis around every CX.
    Joint,
    /// Append the exact inverse of the already twirled circuit.
    Mirror,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZneConfig {
    pub lambdas: Vec<u32>,
    pub twirl_count: usize,
    pub shots: u64,
    pub twirling: bool,
    pub execution: Execution,
    pub readout_mitigation: bool,
    #[serde(skip)]
    pub adjacency: Adjacency,
    pub inverse_twirl: InverseTwirl,
}

impl Default for ZneConfig {
    fn default() -> Self {
        ZneConfig {
            lambdas: vec![1, 3, 5],
            twirl_count: 16,
            shots: 625,
            twirling: true,
            execution: Execution::Sampled,
            readout_mitigation: false,
            adjacency: Adjacency::new(),
            inverse_twirl: InverseTwirl::Joint,
        }
    }
}

impl ZneConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() {
            return Err(Error::InvalidArgument("no noise scaling factors".into()));
        }
        for &l in &self.lambdas {
            crate::circuit::check_lambda(l as i64)?;
        }
        if self.twirl_count == 0 {
            return Err(Error::InvalidArgument("twirl count must be at least 1".into()));
        }
        if self.shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        Ok(())
    }

    /// Shots one method consumes per run.
    pub fn shot_budget(&self, method: Method) -> u64 {
        let per_lambda = self.shots * self.twirl_count as u64;
        match method {
            Method::Raw => per_lambda,
            Method::Szne => per_lambda * self.lambdas.len() as u64,
            Method::Iczne => 2 * per_lambda * self.lambdas.len() as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZneDataPoint {
    pub lambda: u32,
    pub twirl_id: u32,
    pub expval: f64,
    pub p0: Option<f64>,
    pub epsilon: Option<f64>,
    pub shots: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitStatus {
    Ok,
    /// Exponential fit did not settle; a linear fit over `λ` was used.
    Fallback,
    /// All error strengths were zero; the common value is reported unfitted.
    Degenerate,
}

impl FitStatus {
    pub fn name(self) -> &'static str {
        match self {
            FitStatus::Ok => "ok",
            FitStatus::Fallback => "fallback",
            FitStatus::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZneOutcome {
    pub method: Method,
    pub points: Vec<ZneDataPoint>,
    pub fit: Option<FitResult>,
    pub value: f64,
    pub std: f64,
    pub status: FitStatus,
}

impl ZneOutcome {
    pub fn shots_used(&self) -> u64 {
        self.points.iter().map(|p| p.shots).sum()
    }
}

fn stream(seed: u64, method: Method, lambda: u32, twirl_id: u32, stage: u64) -> SimRng {
    rng_from(&[seed, method.tag(), lambda as u64, twirl_id as u64, stage])
}

/// Outcome distribution (as counts or exact quasi-counts) of one circuit.
fn measure(c: &Circuit, nm: &NoiseModel, cfg: &ZneConfig, rng: &mut SimRng) -> Result<MeasurementCounts> {
    let rho = run_exact(c, nm)?;
    let readout = nm.readout.as_ref();
    let counts = match cfg.execution {
        Execution::Sampled => sample_counts(&rho, cfg.shots, rng, readout)?,
        Execution::Exact => MeasurementCounts::from_distribution(&exact_distribution(&rho, readout)?, cfg.shots)?,
    };
    match (cfg.readout_mitigation, readout) {
        (true, Some(rm)) => readout_mitigate(&counts, rm),
        _ => Ok(counts),
    }
}

/// All-zeros return probability of `c` followed by its inverse.
///
/// With `twirling`, the concatenated circuit receives fresh Paulis around
/// every CX. The result is clamped to `[0, 1]`.
pub fn measure_p0(
    c: &Circuit,
    nm: &NoiseModel,
    shots: u64,
    rng: &mut SimRng,
    twirling: bool,
    readout_mitigation: bool,
) -> Result<f64> {
    let cfg = ZneConfig {
        shots,
        twirling,
        readout_mitigation,
        ..ZneConfig::default()
    };
    p0_of(&round_trip(c), nm, &cfg, rng, twirling)
}

/// `measure_p0` without sampling noise.
pub fn measure_p0_exact(c: &Circuit, nm: &NoiseModel, readout_mitigation: bool) -> Result<f64> {
    let cfg = ZneConfig {
        execution: Execution::Exact,
        twirling: false,
        readout_mitigation,
        ..ZneConfig::default()
    };
    p0_of(&round_trip(c), nm, &cfg, &mut rng_from(&[0]), false)
}

fn round_trip(c: &Circuit) -> Circuit {
    let mut full = c.clone();
    full.extend_from(&invert(c)).expect("inverse has the same register");
    full
}

fn p0_of(full: &Circuit, nm: &NoiseModel, cfg: &ZneConfig, rng: &mut SimRng, twirling: bool) -> Result<f64> {
    let circuit = if twirling { twirl(full, rng, &cfg.adjacency) } else { full.clone() };
    let counts = measure(&circuit, nm, cfg, rng)?;
    Ok(counts.frequencies()[0].clamp(0.0, 1.0))
}

/// The circuit actually executed for `(λ, twirl id)`.
fn version(folded: &Circuit, cfg: &ZneConfig, seed: u64, method: Method, lambda: u32, twirl_id: u32) -> Circuit {
    let mut v = if cfg.twirling {
        twirl(folded, &mut stream(seed, method, lambda, twirl_id, stage::TWIRL), &cfg.adjacency)
    } else {
        folded.clone()
    };
    v.twirl_id = cfg.twirling.then_some(twirl_id);
    v
}

fn collect_points(
    c: &Circuit,
    a: &Observable,
    nm: &NoiseModel,
    cfg: &ZneConfig,
    seed: u64,
    method: Method,
    lambdas: &[u32],
) -> Result<Vec<ZneDataPoint>> {
    cfg.validate()?;
    if a.num_qubits() != c.num_qubits() {
        return Err(Error::DimensionMismatch { expected: c.num_qubits(), actual: a.num_qubits() });
    }
    let q = c.num_qubits();
    let mut points = Vec::with_capacity(lambdas.len() * cfg.twirl_count);
    for &lambda in lambdas {
        let folded = fold_cnots(c, lambda as i64)?;
        for t in 0..cfg.twirl_count as u32 {
            let v = version(&folded, cfg, seed, method, lambda, t);
            let counts = measure(&v, nm, cfg, &mut stream(seed, method, lambda, t, stage::SAMPLE))?;
            let expval = counts.expectation(a)?;
            let mut point = ZneDataPoint { lambda, twirl_id: t, expval, p0: None, epsilon: None, shots: cfg.shots };
            if method == Method::Iczne {
                let (full, fresh) = match cfg.inverse_twirl {
                    InverseTwirl::Joint => (round_trip(&folded), cfg.twirling),
                    InverseTwirl::Mirror => (round_trip(&v), false),
                };
                let mut rng = stream(seed, method, lambda, t, stage::P0_TWIRL);
                let p0 = p0_of(&full, nm, cfg, &mut rng, fresh)?;
                point.p0 = Some(p0);
                point.epsilon = Some(estimate_epsilon(p0, q)?.epsilon);
                point.shots += cfg.shots;
            }
            points.push(point);
        }
    }
    Ok(points)
}

fn mean_and_sem(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Unmitigated estimate: the mean over the `λ = 1` versions.
pub fn run_raw(c: &Circuit, a: &Observable, nm: &NoiseModel, cfg: &ZneConfig, seed: u64) -> Result<ZneOutcome> {
    let points = collect_points(c, a, nm, cfg, seed, Method::Raw, &[1])?;
    let values: Vec<f64> = points.iter().map(|p| p.expval).collect();
    let (value, std) = mean_and_sem(&values);
    Ok(ZneOutcome { method: Method::Raw, points, fit: None, value, std, status: FitStatus::Ok })
}

/// Standard ZNE: bounded exponential fit of `⟨A⟩` over `λ`.
pub fn run_szne(c: &Circuit, a: &Observable, nm: &NoiseModel, cfg: &ZneConfig, seed: u64) -> Result<ZneOutcome> {
    let points = collect_points(c, a, nm, cfg, seed, Method::Szne, &cfg.lambdas)?;
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.lambda as f64, p.expval)).collect();
    let fit = fit_exponential_or_linear(&xy, a.bounds())?;
    let status = if fit.fallback { FitStatus::Fallback } else { FitStatus::Ok };
    Ok(ZneOutcome {
        method: Method::Szne,
        value: fit.zero_noise_value,
        std: fit.zero_noise_std,
        points,
        fit: Some(fit),
        status,
    })
}

/// Inverted-circuit ZNE: linear fit of `⟨A⟩` over the measured `ε`.
pub fn run_iczne(c: &Circuit, a: &Observable, nm: &NoiseModel, cfg: &ZneConfig, seed: u64) -> Result<ZneOutcome> {
    let points = collect_points(c, a, nm, cfg, seed, Method::Iczne, &cfg.lambdas)?;
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.epsilon.unwrap_or(0.0), p.expval)).collect();
    if xy.iter().all(|p| p.0 == 0.0) {
        let values: Vec<f64> = xy.iter().map(|p| p.1).collect();
        let (value, std) = mean_and_sem(&values);
        return Ok(ZneOutcome { method: Method::Iczne, points, fit: None, value, std, status: FitStatus::Degenerate });
    }
    let fit = fit_linear(&xy)?;
    Ok(ZneOutcome {
        method: Method::Iczne,
        value: fit.zero_noise_value,
        std: fit.zero_noise_std,
        points,
        fit: Some(fit),
        status: FitStatus::Ok,
    })
}

pub fn run_method(
    method: Method,
    c: &Circuit,
    a: &Observable,
    nm: &NoiseModel,
    cfg: &ZneConfig,
    seed: u64,
) -> Result<ZneOutcome> {
    match method {
        Method::Raw => run_raw(c, a, nm, cfg, seed),
        Method::Szne => run_szne(c, a, nm, cfg, seed),
        Method::Iczne => run_iczne(c, a, nm, cfg, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::grover_benchmark;
    use crate::noise::{build_standard_model, global_depolarizing_cx_model};

    #[test]
    fn noiseless_pipelines_report_ideal() {
        let g = grover_benchmark();
        let cfg = ZneConfig { twirl_count: 4, ..ZneConfig::default() };
        let nm = NoiseModel::noiseless();
        let raw = run_raw(&g.circuit, &g.observable, &nm, &cfg, 7).unwrap();
        assert!((raw.value - 1.0).abs() < 1e-12);
        let sz = run_szne(&g.circuit, &g.observable, &nm, &cfg, 7).unwrap();
        assert!((sz.value - 1.0).abs() < 1e-9);
        let ic = run_iczne(&g.circuit, &g.observable, &nm, &cfg, 7).unwrap();
        assert_eq!(ic.status, FitStatus::Degenerate);
        assert!((ic.value - 1.0).abs() < 1e-12);
        assert!(ic.points.iter().all(|p| p.p0 == Some(1.0) && p.epsilon == Some(0.0)));
    }

    #[test]
    fn shot_accounting() {
        let g = grover_benchmark();
        let cfg = ZneConfig::default();
        let nm = build_standard_model(0.01).unwrap();
        let sz = run_szne(&g.circuit, &g.observable, &nm, &cfg, 1).unwrap();
        assert_eq!(sz.points.len(), 48);
        assert_eq!(sz.shots_used(), 30_000);
        let ic = run_iczne(&g.circuit, &g.observable, &nm, &cfg, 1).unwrap();
        assert_eq!(ic.shots_used(), 60_000);
        assert_eq!(ic.shots_used(), cfg.shot_budget(Method::Iczne));
        let raw = run_raw(&g.circuit, &g.observable, &nm, &cfg, 1).unwrap();
        assert_eq!(raw.shots_used(), 10_000);
    }

    #[test]
    fn exact_global_depolarizing_is_recovered() {
        let g = grover_benchmark();
        let cfg = ZneConfig { execution: Execution::Exact, twirling: false, twirl_count: 1, ..ZneConfig::default() };
        let nm = global_depolarizing_cx_model(0.02).unwrap();
        let sz = run_szne(&g.circuit, &g.observable, &nm, &cfg, 0).unwrap();
        assert!((sz.value - 1.0).abs() < 1e-6, "{}", sz.value);
    }

    #[test]
    fn seeds_are_reproducible() {
        let g = grover_benchmark();
        let cfg = ZneConfig { twirl_count: 3, ..ZneConfig::default() };
        let nm = build_standard_model(0.02).unwrap();
        let a = run_iczne(&g.circuit, &g.observable, &nm, &cfg, 5).unwrap();
        let b = run_iczne(&g.circuit, &g.observable, &nm, &cfg, 5).unwrap();
        assert_eq!(a, b);
        let c = run_iczne(&g.circuit, &g.observable, &nm, &cfg, 6).unwrap();
        assert_ne!(a.points, c.points);
    }

    #[test]
    fn config_validation() {
        let bad = ZneConfig { lambdas: vec![2], ..ZneConfig::default() };
        assert!(bad.validate().is_err());
        assert!(ZneConfig { shots: 0, ..ZneConfig::default() }.validate().is_err());
        assert!("iczne".parse::<Method>().is_ok() && "foo".parse::<Method>().is_err());
    }
}
