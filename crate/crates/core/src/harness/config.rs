//! Experiment configuration files.
//!
//! Flat `key = value` lines; `#` starts a comment; blank lines are ignored.
//! Lists are comma separated. Unknown keys are errors.
//!
//! ```text
//! benchmark = grover            # grover | hhl
//! noise = standard              # standard | global | calibration | coherent | noiseless
//! cx_rate = 0.01                # standard, global
//! calibration_file = cx.csv     # calibration; relative to the config file
//! calibration_layout = 0,1,4    # calibration; device qubit of each circuit qubit
//! coherent_angle_deg = 5        # coherent: ZZ over-rotation after every CX
//! methods = raw,szne,iczne
//! lambdas = 1,3,5
//! twirl_count = 16
//! shots_per_circuit = 625
//! runs = 50
//! master_seed = 2024
//! twirling = false
//! spectators = none             # none | chain
//! inverse_twirl = joint         # joint | mirror
//! readout_p01 = 0.0             # p(read 1 | 0), every qubit
//! readout_p10 = 0.0             # p(read 0 | 1), every qubit
//! readout_mitigation = false
//! exact_mode = false
//! out_dir = results
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::benchmarks::BenchmarkName;
use crate::circuit::Adjacency;
use crate::error::{Error, Result};
use crate::mitigation::{Execution, InverseTwirl, Method, ZneConfig};
use crate::noise::{
    build_standard_model, coherent_cx_model, global_depolarizing_cx_model, Calibration, NoiseModel, ReadoutModel,
};

/// Device qubits used when a calibration config gives no layout.
pub const DEFAULT_CALIBRATION_LAYOUT: [usize; 6] = [0, 1, 4, 7, 10, 12];

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NoiseSpec {
    Noiseless,
    Standard { cx_rate: f64 },
    Global { cx_rate: f64 },
    Calibration { file: PathBuf, layout: Option<Vec<usize>> },
    Coherent { angle_deg: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spectators {
    None,
    Chain,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub benchmark: BenchmarkName,
    pub noise: NoiseSpec,
    pub methods: Vec<Method>,
    pub lambdas: Vec<u32>,
    pub twirl_count: usize,
    pub shots_per_circuit: u64,
    pub runs: usize,
    pub master_seed: u64,
    pub twirling: bool,
    pub spectators: Spectators,
    pub inverse_twirl: InverseTwirl,
    pub readout: Option<(f64, f64)>,
    pub readout_mitigation: bool,
    pub exact_mode: bool,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            benchmark: BenchmarkName::Grover,
            noise: NoiseSpec::Standard { cx_rate: 0.01 },
            methods: Method::ALL.to_vec(),
            lambdas: vec![1, 3, 5],
            twirl_count: 16,
            shots_per_circuit: 625,
            runs: 50,
            master_seed: 0,
            twirling: false,
            spectators: Spectators::None,
            inverse_twirl: InverseTwirl::Joint,
            readout: None,
            readout_mitigation: false,
            exact_mode: false,
            out_dir: None,
        }
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config { line, message: format!("invalid value {value:?} for {key}") })
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config { line, message: format!("invalid boolean {value:?} for {key}") }),
    }
}

fn parse_list<T: FromStr>(line: usize, key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(line, key, s))
        .collect()
}

impl ExperimentConfig {
    /// Parses a config file; relative calibration paths resolve against
    /// `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut values: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Config { line, message: format!("expected key = value, got {content:?}") })?;
            let key = key.trim().to_ascii_lowercase();
            if values.insert(key.clone(), (line, value.trim().to_string())).is_some() {
                return Err(Error::Config { line, message: format!("duplicate key {key}") });
            }
        }

        let mut cfg = ExperimentConfig::default();
        let mut noise_kind = "standard".to_string();
        let mut cx_rate = None;
        let mut calibration_file = None;
        let mut calibration_layout = None;
        let mut angle = None;
        let (mut p01, mut p10) = (0.0, 0.0);
        let mut noise_line = 0;

        for (key, (line, value)) in &values {
            let (line, v) = (*line, value.as_str());
            match key.as_str() {
                "benchmark" => cfg.benchmark = parse_value(line, key, v)?,
                "noise" => {
                    noise_kind = v.to_ascii_lowercase();
                    noise_line = line;
                }
                "cx_rate" => cx_rate = Some(parse_value::<f64>(line, key, v)?),
                "calibration_file" => calibration_file = Some(base_dir.join(v)),
                "calibration_layout" => calibration_layout = Some(parse_list(line, key, v)?),
                "coherent_angle_deg" => angle = Some(parse_value::<f64>(line, key, v)?),
                "methods" => cfg.methods = parse_list(line, key, v)?,
                "lambdas" => cfg.lambdas = parse_list(line, key, v)?,
                "twirl_count" => cfg.twirl_count = parse_value(line, key, v)?,
                "shots_per_circuit" => cfg.shots_per_circuit = parse_value(line, key, v)?,
                "runs" => cfg.runs = parse_value(line, key, v)?,
                "master_seed" => cfg.master_seed = parse_value(line, key, v)?,
                "twirling" => cfg.twirling = parse_bool(line, key, v)?,
                "spectators" => {
                    cfg.spectators = match v.to_ascii_lowercase().as_str() {
                        "none" => Spectators::None,
                        "chain" => Spectators::Chain,
                        _ => return Err(Error::Config { line, message: format!("unknown spectators {v:?}") }),
                    }
                }
                "inverse_twirl" => {
                    cfg.inverse_twirl = match v.to_ascii_lowercase().as_str() {
                        "joint" => InverseTwirl::Joint,
                        "mirror" => InverseTwirl::Mirror,
                        _ => return Err(Error::Config { line, message: format!("unknown inverse_twirl {v:?}") }),
                    }
                }
                "readout_p01" => p01 = parse_value(line, key, v)?,
                "readout_p10" => p10 = parse_value(line, key, v)?,
                "readout_mitigation" => cfg.readout_mitigation = parse_bool(line, key, v)?,
                "exact_mode" => cfg.exact_mode = parse_bool(line, key, v)?,
                "out_dir" => cfg.out_dir = Some(base_dir.join(v)),
                other => return Err(Error::Config { line, message: format!("unknown key {other}") }),
            }
        }

        let missing = |what: &str| Error::Config { line: noise_line, message: format!("noise = {noise_kind} needs {what}") };
        cfg.noise = match noise_kind.as_str() {
            "noiseless" => NoiseSpec::Noiseless,
            "standard" => NoiseSpec::Standard { cx_rate: cx_rate.ok_or_else(|| missing("cx_rate"))? },
            "global" => NoiseSpec::Global { cx_rate: cx_rate.ok_or_else(|| missing("cx_rate"))? },
            "calibration" => NoiseSpec::Calibration {
                file: calibration_file.ok_or_else(|| missing("calibration_file"))?,
                layout: calibration_layout,
            },
            "coherent" => NoiseSpec::Coherent { angle_deg: angle.ok_or_else(|| missing("coherent_angle_deg"))? },
            other => return Err(Error::Config { line: noise_line, message: format!("unknown noise {other:?}") }),
        };
        if p01 != 0.0 || p10 != 0.0 {
            cfg.readout = Some((p01, p10));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ExperimentConfig::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if self.methods.is_empty() {
            return bad("no methods selected".into());
        }
        let unique: BTreeSet<_> = self.methods.iter().collect();
        if unique.len() != self.methods.len() {
            return bad("methods listed twice".into());
        }
        if let Some((p01, p10)) = self.readout {
            ReadoutModel::uniform(1, p01, p10)?;
        }
        self.zne_config(0).validate()
    }

    /// Pipeline settings for a benchmark with `num_qubits` qubits.
    pub fn zne_config(&self, num_qubits: usize) -> ZneConfig {
        ZneConfig {
            lambdas: self.lambdas.clone(),
            twirl_count: self.twirl_count,
            shots: self.shots_per_circuit,
            twirling: self.twirling,
            execution: if self.exact_mode { Execution::Exact } else { Execution::Sampled },
            readout_mitigation: self.readout_mitigation,
            adjacency: match self.spectators {
                Spectators::None => Adjacency::new(),
                Spectators::Chain => chain_adjacency(num_qubits),
            },
            inverse_twirl: self.inverse_twirl,
        }
    }

    /// Builds the noise model for a `num_qubits`-qubit benchmark.
    pub fn noise_model(&self, num_qubits: usize) -> Result<NoiseModel> {
        let model = match &self.noise {
            NoiseSpec::Noiseless => NoiseModel::noiseless(),
            NoiseSpec::Standard { cx_rate } => build_standard_model(*cx_rate)?,
            NoiseSpec::Global { cx_rate } => global_depolarizing_cx_model(*cx_rate)?,
            NoiseSpec::Coherent { angle_deg } => coherent_cx_model(angle_deg.to_radians())?,
            NoiseSpec::Calibration { file, layout } => {
                let layout = layout.clone().unwrap_or_else(|| DEFAULT_CALIBRATION_LAYOUT[..num_qubits.min(6)].to_vec());
                if layout.len() < num_qubits {
                    return Err(Error::InvalidArgument(format!(
                        "calibration layout has {} qubits, circuit needs {num_qubits}",
                        layout.len()
                    )));
                }
                Calibration::from_path(file)?.noise_model()?.with_layout(layout)
            }
        };
        Ok(match self.readout {
            Some((p01, p10)) => model.with_readout(ReadoutModel::uniform(num_qubits, p01, p10)?),
            None => model,
        })
    }
}

/// Nearest neighbours on a linear chain `0 − 1 − … − (n−1)`.
pub fn chain_adjacency(num_qubits: usize) -> Adjacency {
    (0..num_qubits)
        .map(|q| {
            let mut set = BTreeSet::new();
            if q > 0 {
                set.insert(q - 1);
            }
            if q + 1 < num_qubits {
                set.insert(q + 1);
            }
            (q, set)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = "benchmark = hhl\nnoise = standard\ncx_rate = 0.02 # per CX\nmethods = szne, iczne\n\
                    lambdas = 1,3\nruns = 4\nmaster_seed = 9\ntwirling = yes\nspectators = chain\n\
                    readout_p01 = 0.01\nexact_mode = true\n";
        let cfg = ExperimentConfig::parse(text, Path::new("/tmp")).unwrap();
        assert_eq!(cfg.benchmark, BenchmarkName::Hhl);
        assert_eq!(cfg.noise, NoiseSpec::Standard { cx_rate: 0.02 });
        assert_eq!(cfg.methods, vec![Method::Szne, Method::Iczne]);
        assert_eq!(cfg.lambdas, vec![1, 3]);
        assert_eq!(cfg.readout, Some((0.01, 0.0)));
        assert!(cfg.twirling && cfg.exact_mode);
        let z = cfg.zne_config(4);
        assert_eq!(z.adjacency[&1], BTreeSet::from([0, 2]));
        assert_eq!(z.execution, Execution::Exact);
    }

    #[test]
    fn rejects_bad_configs() {
        let base = Path::new(".");
        for (text, line) in [
            ("noise = standard\n", 1),
            ("runs = 0\nnoise = noiseless\n", 0),
            ("noise = noiseless\nlambdas = 1,2\n", 0),
            ("noise = noiseless\nfoo = 1\n", 2),
            ("noise = noiseless\nruns\n", 2),
            ("noise = noiseless\nruns = 1\nruns = 2\n", 3),
            ("noise = noiseless\ntwirling = maybe\n", 2),
        ] {
            match ExperimentConfig::parse(text, base) {
                Err(Error::Config { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                Err(_) => assert_eq!(line, 0, "{text:?}"),
                Ok(_) => panic!("accepted {text:?}"),
            }
        }
    }

    #[test]
    fn chain() {
        let a = chain_adjacency(3);
        assert_eq!(a[&0], BTreeSet::from([1]));
        assert_eq!(a[&2], BTreeSet::from([1]));
    }
}
