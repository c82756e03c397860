use std::fs;

use zne_core::harness::{run_experiment, runs_csv, write_outputs, ExperimentConfig, NoiseSpec};
use zne_core::mitigation::Method;
use zne_core::BenchmarkName;

fn config() -> ExperimentConfig {
    ExperimentConfig {
        benchmark: BenchmarkName::Hhl,
        noise: NoiseSpec::Standard { cx_rate: 0.01 },
        runs: 4,
        twirl_count: 3,
        shots_per_circuit: 300,
        master_seed: 99,
        twirling: true,
        readout: Some((0.02, 0.03)),
        readout_mitigation: true,
        ..ExperimentConfig::default()
    }
}

#[test]
fn csv_independent_of_worker_count() {
    let cfg = config();
    let serial = runs_csv(&run_experiment(&cfg, 1).unwrap().records).unwrap();
    let parallel = runs_csv(&run_experiment(&cfg, 4).unwrap().records).unwrap();
    let again = runs_csv(&run_experiment(&cfg, 4).unwrap().records).unwrap();
    assert_eq!(serial, parallel);
    assert_eq!(parallel, again);
    let other = runs_csv(&run_experiment(&ExperimentConfig { master_seed: 100, ..cfg }, 2).unwrap().records).unwrap();
    assert_ne!(serial, other);
}

#[test]
fn outputs_written_and_summary_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let res = run_experiment(&config(), 2).unwrap();
    let files = write_outputs(&res, dir.path()).unwrap();
    assert_eq!(files.len(), 6);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["readout_mitigator"], "m3-substitute");
    assert_eq!(summary["master_seed"], 99);
    let per_lambda = 300 * 3;
    for (i, want) in [(0, per_lambda), (1, 3 * per_lambda), (2, 6 * per_lambda)] {
        let m = &summary["methods"][i];
        assert_eq!(m["shots_per_run"], want);
        assert_eq!(m["total_shots"], 4 * want);
        assert_eq!(m["shot_accounting_ok"], true);
    }
    let csv = fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "run,method,lambda,twirl_id,shots,expval,p0,epsilon,fit_value,fit_std,status");
    // raw: 3 rows, szne: 9, iczne: 9 per run.
    assert_eq!(csv.lines().count(), 1 + 4 * 21);
    let scatter = fs::read_to_string(dir.path().join("scatter_iczne.svg")).unwrap();
    assert_eq!(scatter.matches("class=\"point\"").count(), 9);
    assert!(res.rmse(Method::Raw).unwrap() > 0.0);
}

#[test]
fn default_protocol_scatter_has_48_points() {
    let cfg = ExperimentConfig { runs: 1, methods: vec![Method::Szne], ..ExperimentConfig::default() };
    let res = run_experiment(&cfg, 1).unwrap();
    let plots = zne_core::harness::emit_plots(&res);
    let (_, svg) = plots.iter().find(|(n, _)| n == "scatter_szne.svg").unwrap();
    assert_eq!(svg.matches("class=\"point\"").count(), 48);
}
