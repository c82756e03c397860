//! Shared workloads for the criterion benchmarks.

use zne_core::mitigation::Execution;
use zne_core::noise::build_standard_model;
use zne_core::simulator::{run_exact, DensityMatrix};
use zne_core::{BenchmarkName, BenchmarkSpec, NoiseModel, ZneConfig};

pub struct Workload {
    pub spec: BenchmarkSpec,
    pub noise: NoiseModel,
    pub config: ZneConfig,
}

/// One benchmark under 1% local depolarizing CX noise with a reduced
/// protocol (4 twirls) so a single iteration stays in the millisecond range.
pub fn workload(name: BenchmarkName, execution: Execution) -> Workload {
    Workload {
        spec: name.spec(),
        noise: build_standard_model(0.01).expect("valid rate"),
        config: ZneConfig { twirl_count: 4, execution, ..ZneConfig::default() },
    }
}

pub fn evolve(w: &Workload) -> DensityMatrix {
    run_exact(&w.spec.circuit, &w.noise).expect("benchmark circuits simulate")
}
