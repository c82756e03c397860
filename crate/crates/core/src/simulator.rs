//! Dense density-matrix simulation.

use std::collections::BTreeMap;

use nalgebra::SymmetricEigen;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::circuit::{bitstring_index, index_bitstring, invert, Circuit, Gate, Observable};
use crate::error::{Error, Result};
use crate::linalg::{self, apply_left, conjugate, CMatrix, CVector, ONE};
use crate::noise::{NoiseModel, ReadoutModel};

/// Default register cap for [`run_exact`].
pub const MAX_QUBITS: usize = 6;

const CPTP_TOL: f64 = 1e-12;
const CLIP_BUDGET: f64 = 1e-9;
const MASS_TOL: f64 = 1e-6;

/// A Kraus channel on `num_qubits` qubits, placed on a qubit subset when
/// applied.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    num_qubits: usize,
    operators: Vec<CMatrix>,
}

impl KrausChannel {
    /// Rejects operator sets that are not trace preserving to 1e-12.
    pub fn new(num_qubits: usize, operators: Vec<CMatrix>) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if operators.is_empty() {
            return Err(Error::InvalidArgument("Kraus channel without operators".into()));
        }
        let mut sum = CMatrix::zeros(dim, dim);
        for k in &operators {
            if k.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch { expected: dim, actual: k.nrows() });
            }
            sum += k.adjoint() * k;
        }
        let deviation = linalg::max_abs_diff(&sum, &linalg::identity(dim));
        if !(deviation < CPTP_TOL) {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(KrausChannel { num_qubits, operators })
    }

    pub fn unitary(u: CMatrix) -> Result<Self> {
        let n = u.nrows().trailing_zeros() as usize;
        KrausChannel::new(n, vec![u])
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// `Σ K m K†` with each `K` embedded on `qubits`.
    pub fn apply(&self, m: &CMatrix, qubits: &[usize], num_qubits: usize) -> CMatrix {
        let mut out = CMatrix::zeros(m.nrows(), m.ncols());
        for k in &self.operators {
            out += conjugate(k, qubits, num_qubits, m);
        }
        out
    }

    /// `Σ K† m K`.
    pub fn apply_adjoint(&self, m: &CMatrix, qubits: &[usize], num_qubits: usize) -> CMatrix {
        let mut out = CMatrix::zeros(m.nrows(), m.ncols());
        for k in &self.operators {
            out += conjugate(&k.adjoint(), qubits, num_qubits, m);
        }
        out
    }

    /// Channel followed by `other` (both on the same qubits).
    pub fn then(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, actual: other.num_qubits });
        }
        let mut ops = Vec::with_capacity(self.operators.len() * other.operators.len());
        for b in &other.operators {
            for a in &self.operators {
                ops.push(b * a);
            }
        }
        KrausChannel::new(self.num_qubits, ops)
    }
}

/// A `2^q × 2^q` density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: CMatrix,
}

/// Deviations of a density matrix from physicality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physicality {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl Physicality {
    pub fn is_physical(&self) -> bool {
        self.trace_error < 1e-12 && self.hermiticity_error < 1e-12 && self.min_eigenvalue > -1e-10
    }
}

impl DensityMatrix {
    pub fn zero_state(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let mut matrix = CMatrix::zeros(dim, dim);
        matrix[(0, 0)] = ONE;
        DensityMatrix { num_qubits, matrix }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        DensityMatrix { num_qubits, matrix: linalg::identity(dim).map(|z| z / dim as f64) }
    }

    pub fn from_pure(psi: &CVector) -> Result<Self> {
        let num_qubits = dim_to_qubits(psi.len())?;
        DensityMatrix::from_matrix(linalg::pure_state(psi)).map(|d| DensityMatrix { num_qubits, ..d })
    }

    /// Validates trace, Hermiticity and positivity.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), actual: matrix.ncols() });
        }
        let num_qubits = dim_to_qubits(matrix.nrows())?;
        let rho = DensityMatrix { num_qubits, matrix };
        let p = rho.physicality();
        if !p.is_physical() {
            return Err(Error::InvalidArgument(format!("not a density matrix: {p:?}")));
        }
        Ok(rho)
    }

    #[cfg(test)]
    pub(crate) fn from_matrix_unchecked(num_qubits: usize, matrix: CMatrix) -> Self {
        DensityMatrix { num_qubits, matrix }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    pub fn physicality(&self) -> Physicality {
        let trace = linalg::trace(&self.matrix);
        let hermiticity_error = linalg::max_abs_diff(&self.matrix, &self.matrix.adjoint());
        let hermitian = (&self.matrix + self.matrix.adjoint()).map(|z| z * 0.5);
        let min_eigenvalue = SymmetricEigen::new(hermitian).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        Physicality {
            trace_error: (trace - ONE).norm(),
            hermiticity_error,
            min_eigenvalue,
        }
    }

    /// Diagonal of `ρ` as real probabilities (unclipped).
    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Outcome distribution with negative round-off clipped and the mass
    /// renormalized.
    pub fn probabilities(&self) -> Result<Vec<f64>> {
        clean_distribution(self.diagonal())
    }
}

fn dim_to_qubits(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch { expected: dim.next_power_of_two(), actual: dim });
    }
    Ok(dim.trailing_zeros() as usize)
}

fn clean_distribution(mut probs: Vec<f64>) -> Result<Vec<f64>> {
    let mass: f64 = probs.iter().sum();
    if !((mass - 1.0).abs() <= MASS_TOL) {
        return Err(Error::InvalidDistribution { mass });
    }
    let clipped: f64 = probs.iter().filter(|&&p| p < 0.0).map(|p| -p).sum();
    if clipped > CLIP_BUDGET {
        return Err(Error::InvalidDistribution { mass: mass + clipped });
    }
    for p in probs.iter_mut() {
        *p = p.max(0.0);
    }
    let total: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p /= total;
    }
    Ok(probs)
}

fn check_qubits(qubits: &[usize], num_qubits: usize, op_dim: usize) -> Result<()> {
    let expected = 1usize << qubits.len();
    if op_dim != expected {
        return Err(Error::DimensionMismatch { expected, actual: op_dim });
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q >= num_qubits || qubits[..i].contains(&q) {
            return Err(Error::InvalidArgument(format!("bad qubit list {qubits:?} for {num_qubits} qubits")));
        }
    }
    Ok(())
}

/// `ρ → U ρ U†` with `U` on `qubits`.
pub fn apply_unitary(rho: &DensityMatrix, u: &CMatrix, qubits: &[usize]) -> Result<DensityMatrix> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch { expected: u.nrows(), actual: u.ncols() });
    }
    check_qubits(qubits, rho.num_qubits, u.nrows())?;
    let n = rho.num_qubits;
    Ok(DensityMatrix { num_qubits: n, matrix: conjugate(u, qubits, n, &rho.matrix) })
}

pub fn apply_gate(rho: &DensityMatrix, gate: &Gate) -> Result<DensityMatrix> {
    apply_unitary(rho, &gate.matrix(), &gate.qubits())
}

/// `ρ → Σ K ρ K†` with the channel on `qubits`.
pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel, qubits: &[usize]) -> Result<DensityMatrix> {
    check_qubits(qubits, rho.num_qubits, 1 << ch.num_qubits())?;
    let n = rho.num_qubits;
    Ok(DensityMatrix { num_qubits: n, matrix: ch.apply(&rho.matrix, qubits, n) })
}

/// Evolves `m` through every gate of `c` followed by its noise channel.
pub(crate) fn evolve(m: CMatrix, c: &Circuit, nm: &NoiseModel) -> Result<CMatrix> {
    let n = c.num_qubits();
    let mut m = m;
    for gate in c.gates() {
        let channel = nm.channel_for(gate)?;
        let qubits = gate.qubits();
        m = conjugate(&gate.matrix(), &qubits, n, &m);
        m = channel.apply(&m, &qubits, n);
    }
    Ok(m)
}

fn check_cap(c: &Circuit, cap: usize) -> Result<()> {
    if c.num_qubits() > cap {
        return Err(Error::TooManyQubits { qubits: c.num_qubits(), cap });
    }
    Ok(())
}

/// Noisy output state of `c` started from `|0…0⟩`.
pub fn run_exact(c: &Circuit, nm: &NoiseModel) -> Result<DensityMatrix> {
    run_exact_capped(c, nm, MAX_QUBITS)
}

pub fn run_exact_capped(c: &Circuit, nm: &NoiseModel, cap: usize) -> Result<DensityMatrix> {
    check_cap(c, cap)?;
    let n = c.num_qubits();
    let m = evolve(DensityMatrix::zero_state(n).matrix, c, nm)?;
    Ok(DensityMatrix { num_qubits: n, matrix: m })
}

/// Noiseless output state vector.
pub fn run_ideal(c: &Circuit) -> CVector {
    let n = c.num_qubits();
    let mut psi = linalg::basis_vector(1 << n, 0);
    for gate in c.gates() {
        let col = CMatrix::from_column_slice(psi.len(), 1, psi.as_slice());
        let out = apply_left(&gate.matrix(), &gate.qubits(), n, &col);
        psi = CVector::from_column_slice(out.as_slice());
    }
    psi
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity(rho: &DensityMatrix, psi: &CVector) -> Result<f64> {
    fidelity_operator(&rho.matrix, psi)
}

/// `⟨ψ|M|ψ⟩` for any Hermitian operator `M`, e.g. the dual state.
pub fn fidelity_operator(m: &CMatrix, psi: &CVector) -> Result<f64> {
    if m.nrows() != psi.len() || !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), actual: psi.len() });
    }
    let value = (psi.adjoint() * m * psi)[(0, 0)];
    debug_assert!(value.im.abs() < 1e-10, "non-real fidelity {value}");
    Ok(value.re)
}

/// `ρ̃ = E†_{U†}(|0⟩⟨0|)`: adjoints of the gate-plus-noise steps of
/// `invert(c)`, applied in reverse order.
pub fn dual_state(c: &Circuit, nm: &NoiseModel) -> Result<CMatrix> {
    check_cap(c, MAX_QUBITS)?;
    let n = c.num_qubits();
    let inverse = invert(c);
    let mut m = DensityMatrix::zero_state(n).matrix;
    for gate in inverse.gates().iter().rev() {
        let channel = nm.channel_for(gate)?;
        let qubits = gate.qubits();
        m = channel.apply_adjoint(&m, &qubits, n);
        m = conjugate(&gate.matrix().adjoint(), &qubits, n, &m);
    }
    Ok(m)
}

/// Shot counts (or quasi-counts after readout mitigation) over `2^q`
/// outcomes, indexed by basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementCounts {
    num_qubits: usize,
    shots: u64,
    counts: Vec<f64>,
    quasi: bool,
}

impl MeasurementCounts {
    pub fn from_counts(num_qubits: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << num_qubits, actual: counts.len() });
        }
        let shots = counts.iter().sum();
        Ok(MeasurementCounts { num_qubits, shots, counts: counts.into_iter().map(|c| c as f64).collect(), quasi: false })
    }

    /// Builds raw counts from `(bitstring, count)` pairs.
    pub fn from_pairs(num_qubits: usize, pairs: &[(&str, u64)]) -> Result<Self> {
        let mut counts = vec![0u64; 1 << num_qubits];
        for (bits, n) in pairs {
            counts[bitstring_index(bits, num_qubits)?] += n;
        }
        MeasurementCounts::from_counts(num_qubits, counts)
    }

    /// Real-valued counts summing to `shots` (within 1e-9).
    pub fn from_quasi(num_qubits: usize, shots: u64, counts: Vec<f64>) -> Result<Self> {
        if counts.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << num_qubits, actual: counts.len() });
        }
        let total: f64 = counts.iter().sum();
        if (total - shots as f64).abs() > 1e-9 * (shots as f64).max(1.0) {
            return Err(Error::InvalidDistribution { mass: total / shots as f64 });
        }
        Ok(MeasurementCounts { num_qubits, shots, counts, quasi: true })
    }

    /// Infinite-shot stand-in: expected counts `shots · p`.
    pub fn from_distribution(probs: &[f64], shots: u64) -> Result<Self> {
        let n = dim_to_qubits(probs.len())?;
        MeasurementCounts::from_quasi(n, shots, probs.iter().map(|p| p * shots as f64).collect())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn is_quasi(&self) -> bool {
        self.quasi
    }

    pub fn get(&self, bitstring: &str) -> Result<f64> {
        Ok(self.counts[bitstring_index(bitstring, self.num_qubits)?])
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let shots = self.shots as f64;
        self.counts.iter().map(|c| c / shots).collect()
    }

    /// Nonzero entries keyed by bitstring.
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &c)| (index_bitstring(i, self.num_qubits), c))
            .collect()
    }

    pub fn expectation(&self, a: &Observable) -> Result<f64> {
        expectation_diagonal(self, a)
    }
}

/// Anything that yields an outcome distribution over computational-basis
/// states.
pub trait OutcomeDistribution {
    fn num_qubits(&self) -> usize;
    fn outcome_weights(&self) -> Vec<f64>;
}

impl OutcomeDistribution for MeasurementCounts {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn outcome_weights(&self) -> Vec<f64> {
        self.frequencies()
    }
}

impl OutcomeDistribution for DensityMatrix {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn outcome_weights(&self) -> Vec<f64> {
        self.diagonal()
    }
}

/// `Σ a_i w_i` over the outcome weights of `src`.
pub fn expectation_diagonal(src: &impl OutcomeDistribution, a: &Observable) -> Result<f64> {
    if src.num_qubits() != a.num_qubits() {
        return Err(Error::DimensionMismatch { expected: a.num_qubits(), actual: src.num_qubits() });
    }
    Ok(src.outcome_weights().iter().zip(a.diagonal()).map(|(w, v)| w * v).sum())
}

/// Exact outcome distribution of `ρ` after optional readout noise.
pub fn exact_distribution(rho: &DensityMatrix, readout: Option<&ReadoutModel>) -> Result<Vec<f64>> {
    let probs = rho.probabilities()?;
    match readout {
        Some(rm) => {
            check_readout(rm, rho.num_qubits)?;
            Ok(rm.apply_to_distribution(&probs))
        }
        None => Ok(probs),
    }
}

fn check_readout(rm: &ReadoutModel, n: usize) -> Result<()> {
    if rm.num_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: rm.num_qubits() });
    }
    Ok(())
}

/// Draws `shots` i.i.d. outcomes from the diagonal of `ρ`, then flips each
/// bit independently per the readout model.
pub fn sample_counts(
    rho: &DensityMatrix,
    shots: u64,
    rng: &mut impl Rng,
    readout: Option<&ReadoutModel>,
) -> Result<MeasurementCounts> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let n = rho.num_qubits;
    if let Some(rm) = readout {
        check_readout(rm, n)?;
    }
    let probs = rho.probabilities()?;
    let dist = WeightedIndex::new(&probs).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let mut outcome = dist.sample(rng);
        if let Some(rm) = readout {
            for (q, &(p01, p10)) in rm.flips().iter().enumerate() {
                let mask = 1usize << linalg::bit_shift(q, n);
                let p = if outcome & mask == 0 { p01 } else { p10 };
                if p > 0.0 && rng.random_bool(p) {
                    outcome ^= mask;
                }
            }
        }
        counts[outcome] += 1;
    }
    MeasurementCounts::from_counts(n, counts)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_diff};
    use crate::noise::{build_standard_model, depolarizing_channel, NoiseChannel};
    use crate::seed::rng_from;
    use rand::Rng;

    pub(crate) fn random_density(n: usize, rng: &mut impl Rng) -> CMatrix {
        let d = 1 << n;
        let a = CMatrix::from_fn(d, d, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let m = &a * a.adjoint();
        let tr = linalg::trace(&m);
        m.map(|z| z / tr)
    }

    #[test]
    fn unitary_application() {
        let rho = DensityMatrix::zero_state(1);
        let same = apply_unitary(&rho, &linalg::identity(2), &[0]).unwrap();
        assert_eq!(same, rho);
        let flipped = apply_gate(&rho, &Gate::x(0)).unwrap();
        assert!((flipped.matrix()[(1, 1)].re - 1.0).abs() < 1e-15);

        let mut m = CMatrix::zeros(4, 4);
        m[(2, 2)] = ONE;
        let rho = DensityMatrix::from_matrix(m).unwrap();
        let out = apply_gate(&rho, &Gate::cx(0, 1)).unwrap();
        assert!((out.matrix()[(3, 3)].re - 1.0).abs() < 1e-15);

        assert!(matches!(
            apply_unitary(&rho, &linalg::identity(2), &[0, 1]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(apply_unitary(&rho, &linalg::identity(2), &[2]).is_err());
    }

    #[test]
    fn channel_application() {
        let mut rng = rng_from(&[1]);
        let rho = DensityMatrix::from_matrix(random_density(1, &mut rng)).unwrap();
        let id = depolarizing_channel(0.0, 1).unwrap();
        assert!(max_abs_diff(apply_channel(&rho, &id, &[0]).unwrap().matrix(), rho.matrix()) < 1e-15);
        let full = depolarizing_channel(1.0, 1).unwrap();
        let mixed = apply_channel(&rho, &full, &[0]).unwrap();
        assert!(max_abs_diff(mixed.matrix(), DensityMatrix::maximally_mixed(1).matrix()) < 1e-12);

        let p = depolarizing_channel(0.1, 1).unwrap();
        let twice = apply_channel(&apply_channel(&rho, &p, &[0]).unwrap(), &p, &[0]).unwrap();
        let once = apply_channel(&rho, &depolarizing_channel(0.19, 1).unwrap(), &[0]).unwrap();
        assert!(max_abs_diff(twice.matrix(), once.matrix()) < 1e-12);
    }

    #[test]
    fn kraus_rejects_non_trace_preserving() {
        let k = linalg::identity(2).map(|z| z * 0.9);
        assert!(matches!(KrausChannel::new(1, vec![k]), Err(Error::NotTracePreserving { .. })));
    }

    #[test]
    fn empty_and_single_gate_circuits() {
        let c = Circuit::new(3);
        let rho = run_exact(&c, &NoiseModel::noiseless()).unwrap();
        assert_eq!(rho, DensityMatrix::zero_state(3));
        assert_eq!(run_ideal(&c), linalg::basis_vector(8, 0));
        let mut c = Circuit::new(1);
        c.x(0);
        assert!((run_ideal(&c)[1] - ONE).norm() < 1e-15);
    }

    #[test]
    fn cap_and_unresolved_gates() {
        let c = Circuit::new(7);
        assert!(matches!(run_exact(&c, &NoiseModel::noiseless()), Err(Error::TooManyQubits { .. })));
        let mut c = Circuit::new(2);
        c.cx(0, 1);
        let model = NoiseModel::empty().with_single_qubit(NoiseChannel::Identity).unwrap();
        assert!(matches!(run_exact(&c, &model), Err(Error::UnresolvedGate(_))));
    }

    #[test]
    fn fidelity_values() {
        let mut rng = rng_from(&[2]);
        let psi = {
            let v = CVector::from_fn(8, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            v.normalize()
        };
        let pure = DensityMatrix::from_pure(&psi).unwrap();
        assert!((fidelity(&pure, &psi).unwrap() - 1.0).abs() < 1e-12);
        assert!((fidelity(&DensityMatrix::maximally_mixed(3), &psi).unwrap() - 0.125).abs() < 1e-12);
        let p = 0.3;
        let noisy = apply_channel(&pure, &depolarizing_channel(p, 3).unwrap(), &[0, 1, 2]).unwrap();
        assert!((fidelity(&noisy, &psi).unwrap() - (1.0 - p * (1.0 - 0.125))).abs() < 1e-12);
        assert!(fidelity(&DensityMatrix::zero_state(1), &psi).is_err());
    }

    #[test]
    fn dual_state_simple_cases() {
        let mut c = Circuit::new(2);
        c.sx(0).cx(0, 1).rz(1, 0.4);
        let noiseless = dual_state(&c, &NoiseModel::noiseless()).unwrap();
        let psi = run_ideal(&c);
        assert!(max_abs_diff(&noiseless, &linalg::pure_state(&psi)) < 1e-12);
        let dep = build_standard_model(0.05).unwrap();
        let rho = run_exact(&c, &dep).unwrap();
        assert!(max_abs_diff(&dual_state(&c, &dep).unwrap(), rho.matrix()) < 1e-12);
    }

    #[test]
    fn sampling() {
        let rho = DensityMatrix::zero_state(3);
        let counts = sample_counts(&rho, 100, &mut rng_from(&[3]), None).unwrap();
        assert_eq!(counts.get("000").unwrap(), 100.0);
        assert_eq!(counts.to_map().len(), 1);

        let mixed = DensityMatrix::maximally_mixed(1);
        let a = sample_counts(&mixed, 10_000, &mut rng_from(&[4]), None).unwrap();
        let b = sample_counts(&mixed, 10_000, &mut rng_from(&[4]), None).unwrap();
        assert_eq!(a, b);
        assert!(sample_counts(&mixed, 0, &mut rng_from(&[4]), None).is_err());

        let bad = DensityMatrix::from_matrix_unchecked(1, linalg::identity(2));
        assert!(matches!(sample_counts(&bad, 10, &mut rng_from(&[5]), None), Err(Error::InvalidDistribution { .. })));
    }

    #[test]
    fn readout_flips_during_sampling() {
        let rho = DensityMatrix::zero_state(1);
        let rm = ReadoutModel::uniform(1, 0.2, 0.0).unwrap();
        let counts = sample_counts(&rho, 100_000, &mut rng_from(&[6]), Some(&rm)).unwrap();
        let f1 = counts.get("1").unwrap() / 100_000.0;
        assert!((f1 - 0.2).abs() < 5.0 * (0.2f64 * 0.8 / 100_000.0).sqrt());
    }

    #[test]
    fn expectations() {
        let a = Observable::projector(3, &["101", "011"]).unwrap();
        let c = MeasurementCounts::from_pairs(3, &[("101", 625)]).unwrap();
        assert_eq!(c.expectation(&a).unwrap(), 1.0);
        let c = MeasurementCounts::from_pairs(3, &[("101", 300), ("011", 200), ("000", 125)]).unwrap();
        assert!((c.expectation(&a).unwrap() - 0.8).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(3);
        assert!((expectation_diagonal(&mixed, &a).unwrap() - 0.25).abs() < 1e-15);
        assert!(expectation_diagonal(&DensityMatrix::zero_state(2), &a).is_err());
    }
}
