//! Noisy density-matrix simulation and zero-noise extrapolation.
//!
//! The crate is organised bottom-up:
//!
//! * [`circuit`] holds the gate-list IR, its text format and the circuit
//!   transformations (inversion, CNOT folding, Pauli twirling, contraction).
//! * [`simulator`] evolves dense density matrices under gates and Kraus
//!   channels and samples measurement shots.
//! * [`noise`] builds noise models (depolarizing, Pauli, coherent, device
//!   calibration tables) and readout models.
//! * [`mitigation`] implements standard ZNE (exponential fit over the noise
//!   scaling factor) and inverted-circuit ZNE (linear fit over the error
//!   strength measured with `U` followed by `U†`).
//! * [`benchmarks`] provides the Grover and HHL test circuits.
//! * [`harness`] runs repeated seeded experiments and writes CSV, JSON and SVG.

pub mod benchmarks;
pub mod circuit;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod mitigation;
pub mod noise;
pub mod seed;
pub mod simulator;

pub use benchmarks::{grover_benchmark, hhl_benchmark, hhl_solution_norm, BenchmarkName, BenchmarkSpec};
pub use circuit::{Circuit, Gate, Observable, Pauli, PauliString};
pub use error::{Error, Result};
pub use mitigation::{
    estimate_epsilon, fit_exponential, fit_linear, EpsilonEstimate, FitModel, FitResult, ZneConfig,
    ZneDataPoint, ZneOutcome,
};
pub use noise::{NoiseChannel, NoiseModel, ReadoutModel};
pub use simulator::{DensityMatrix, KrausChannel, MeasurementCounts};
