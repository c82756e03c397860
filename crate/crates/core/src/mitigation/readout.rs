//! Readout-error mitigation by inverting the tensor-product confusion matrix.
//!
//! Stands in for the M3 mitigator: for the small registers used here the full
//! `2^q × 2^q` least-squares solve is exact and cheap.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::noise::ReadoutModel;
use crate::simulator::MeasurementCounts;

pub const MITIGATOR_LABEL: &str = "m3-substitute";

const MAX_MITIGATION_QUBITS: usize = 6;

/// Solves `M x = f` in the least-squares sense, clips negative entries and
/// rescales to the original shot total.
pub fn readout_mitigate(counts: &MeasurementCounts, rm: &ReadoutModel) -> Result<MeasurementCounts> {
    let n = counts.num_qubits();
    if rm.num_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: rm.num_qubits() });
    }
    if n > MAX_MITIGATION_QUBITS {
        return Err(Error::TooManyQubits { qubits: n, cap: MAX_MITIGATION_QUBITS });
    }
    if rm.flips().iter().all(|&(a, b)| a == 0.0 && b == 0.0) {
        return Ok(counts.clone());
    }
    let m = rm.confusion_matrix();
    let svd = m.svd(true, true);
    let smallest = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    if !(smallest > 1e-12) {
        return Err(Error::SingularConfusion(format!("smallest singular value {smallest:e}")));
    }
    let f = DVector::from_column_slice(&counts.frequencies());
    let x = svd.solve(&f, 0.0).map_err(|e| Error::SingularConfusion(e.to_string()))?;

    let clipped: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
    let mass: f64 = clipped.iter().sum();
    if !(mass > 0.0) {
        return Err(Error::SingularConfusion("mitigated distribution has no mass".into()));
    }
    let shots = counts.shots() as f64;
    let quasi = clipped.iter().map(|v| v / mass * shots).collect();
    MeasurementCounts::from_quasi(n, counts.shots(), quasi)
}
