//! Noise channels and noise models.
//!
//! Depolarizing strength follows the replacement convention
//! `Λ_p(ρ) = (1 − p) ρ + p I/2^n`: with probability `p` the state is replaced
//! by the maximally mixed one. The equivalent per-Pauli error probability is
//! `p / 4^n` for each non-identity Pauli, so the total probability of a
//! non-trivial Pauli is `p (4^n − 1)/4^n`. Under this convention `λ`
//! sequential applications give `1 − (1 − p)^λ` exactly.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, Pauli, PauliString};
use crate::error::{Error, Result};
use crate::linalg::{self, bit_shift, CMatrix, ZERO};
use crate::simulator::KrausChannel;

/// Largest register a depolarizing Kraus set is built for (`4^n` operators).
const MAX_KRAUS_QUBITS: usize = 4;

pub fn depolarizing_channel(p: f64, nqubits: usize) -> Result<KrausChannel> {
    check_probability(p, "depolarizing probability")?;
    if nqubits == 0 || nqubits > MAX_KRAUS_QUBITS {
        return Err(Error::InvalidArgument(format!("depolarizing channel on {nqubits} qubits")));
    }
    let d2 = (1usize << (2 * nqubits)) as f64;
    let mut ops = Vec::with_capacity(d2 as usize);
    for pauli in PauliString::all(nqubits) {
        let weight = if pauli.is_identity() { 1.0 - p * (d2 - 1.0) / d2 } else { p / d2 };
        if weight > 0.0 {
            ops.push(pauli.matrix().map(|z| z * weight.sqrt()));
        }
    }
    KrausChannel::new(nqubits, ops)
}

/// `ρ → Σ p_i P_i ρ P_i`.
pub fn pauli_channel(probs: &[(PauliString, f64)]) -> Result<KrausChannel> {
    let n = probs.first().map(|(p, _)| p.len()).ok_or_else(|| {
        Error::InvalidProbability("Pauli channel needs at least one term".into())
    })?;
    let mut total = 0.0;
    let mut ops = Vec::new();
    for (pauli, prob) in probs {
        if pauli.len() != n {
            return Err(Error::InvalidArgument("Pauli strings of mixed length".into()));
        }
        if !(*prob >= 0.0) {
            return Err(Error::InvalidProbability(format!("{pauli}: {prob}")));
        }
        total += prob;
        if *prob > 0.0 {
            ops.push(pauli.unsigned().matrix().map(|z| z * prob.sqrt()));
        }
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProbability(format!("Pauli probabilities sum to {total}")));
    }
    KrausChannel::new(n, ops)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoherentAxis {
    X,
    Z,
    ZZ,
}

/// Unitary error `exp(−i·angle/2·G)` with `G ∈ {X, Z, Z⊗Z}`.
pub fn coherent_error(angle: f64, axis: CoherentAxis) -> Result<KrausChannel> {
    if !angle.is_finite() {
        return Err(Error::InvalidArgument(format!("coherent angle {angle}")));
    }
    let generator = match axis {
        CoherentAxis::X => PauliString::new(vec![Pauli::X]),
        CoherentAxis::Z => PauliString::new(vec![Pauli::Z]),
        CoherentAxis::ZZ => PauliString::new(vec![Pauli::Z, Pauli::Z]),
    };
    let g = generator.matrix();
    let dim = g.nrows();
    // G² = I, so exp(−iθG/2) = cos(θ/2) I − i sin(θ/2) G.
    let (s, c) = (angle / 2.0).sin_cos();
    let u = linalg::identity(dim).map(|z| z * c) - g.map(|z| z * Complex64::new(0.0, s));
    KrausChannel::new(generator.len(), vec![u])
}

/// Pauli transfer matrix `R_ij = tr(P_i Λ(P_j)) / 2^n`.
pub fn pauli_transfer_matrix(ch: &KrausChannel) -> DMatrix<f64> {
    let n = ch.num_qubits();
    let paulis: Vec<CMatrix> = PauliString::all(n).iter().map(PauliString::matrix).collect();
    let qubits: Vec<usize> = (0..n).collect();
    let d = (1usize << n) as f64;
    let images: Vec<CMatrix> = paulis.iter().map(|p| ch.apply(p, &qubits, n)).collect();
    DMatrix::from_fn(paulis.len(), paulis.len(), |i, j| {
        linalg::trace(&(&paulis[i] * &images[j])).re / d
    })
}

/// Error channel attached to a gate (applied right after it).
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseChannel {
    Identity,
    /// Kraus channel on the gate's own qubits.
    Kraus(KrausChannel),
    /// Depolarizing channel on the gate's own qubits; evaluated in closed form.
    Depolarizing { p: f64 },
    /// Depolarizing channel on the entire register after the gate.
    GlobalDepolarizing { p: f64 },
}

impl NoiseChannel {
    pub fn depolarizing(p: f64) -> Result<Self> {
        check_probability(p, "depolarizing probability")?;
        Ok(if p == 0.0 { NoiseChannel::Identity } else { NoiseChannel::Depolarizing { p } })
    }

    pub fn global_depolarizing(p: f64) -> Result<Self> {
        check_probability(p, "depolarizing probability")?;
        Ok(if p == 0.0 { NoiseChannel::Identity } else { NoiseChannel::GlobalDepolarizing { p } })
    }

    fn arity_ok(&self, arity: usize) -> bool {
        match self {
            NoiseChannel::Kraus(k) => k.num_qubits() == arity,
            _ => true,
        }
    }

    /// Applies the channel to `m` after a gate on `qubits`.
    pub fn apply(&self, m: &CMatrix, qubits: &[usize], num_qubits: usize) -> CMatrix {
        match self {
            NoiseChannel::Identity => m.clone(),
            NoiseChannel::Kraus(k) => k.apply(m, qubits, num_qubits),
            NoiseChannel::Depolarizing { p } => depolarize_subset(m, *p, qubits, num_qubits),
            NoiseChannel::GlobalDepolarizing { p } => depolarize_all(m, *p),
        }
    }

    /// Adjoint map `Λ†` (Hilbert–Schmidt).
    pub fn apply_adjoint(&self, m: &CMatrix, qubits: &[usize], num_qubits: usize) -> CMatrix {
        match self {
            NoiseChannel::Kraus(k) => k.apply_adjoint(m, qubits, num_qubits),
            // Depolarizing channels are self-adjoint.
            other => other.apply(m, qubits, num_qubits),
        }
    }
}

fn depolarize_all(m: &CMatrix, p: f64) -> CMatrix {
    let dim = m.nrows();
    let tr = linalg::trace(m);
    let mut out = m.map(|z| z * (1.0 - p));
    for i in 0..dim {
        out[(i, i)] += tr * (p / dim as f64);
    }
    out
}

/// `(1 − p) m + p · I_S/2^k ⊗ Tr_S(m)` for the qubit subset `S`.
fn depolarize_subset(m: &CMatrix, p: f64, qubits: &[usize], num_qubits: usize) -> CMatrix {
    let dim = m.nrows();
    let k = qubits.len();
    let sub = 1usize << k;
    let mask: usize = qubits.iter().map(|&q| 1usize << bit_shift(q, num_qubits)).sum();
    let offsets: Vec<usize> = (0..sub)
        .map(|l| {
            (0..k)
                .filter(|&j| (l >> (k - 1 - j)) & 1 == 1)
                .map(|j| 1usize << bit_shift(qubits[j], num_qubits))
                .sum()
        })
        .collect();
    let mut out = m.map(|z| z * (1.0 - p));
    let scale = p / sub as f64;
    let bases: Vec<usize> = (0..dim).filter(|i| i & mask == 0).collect();
    for &bi in &bases {
        for &bj in &bases {
            let reduced: Complex64 = offsets.iter().map(|o| m[(bi + o, bj + o)]).sum();
            if reduced == ZERO {
                continue;
            }
            for o in &offsets {
                out[(bi + o, bj + o)] += reduced * scale;
            }
        }
    }
    out
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(format!("{what} {p} outside [0, 1]")))
    }
}

/// Per-qubit bit-flip readout model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutModel {
    /// `(p(read 1 | 0), p(read 0 | 1))` for each qubit.
    flips: Vec<(f64, f64)>,
}

impl ReadoutModel {
    pub fn new(flips: Vec<(f64, f64)>) -> Result<Self> {
        for &(p01, p10) in &flips {
            for p in [p01, p10] {
                if !(0.0..0.5).contains(&p) {
                    return Err(Error::InvalidProbability(format!("readout flip probability {p} outside [0, 0.5)")));
                }
            }
        }
        Ok(ReadoutModel { flips })
    }

    pub fn uniform(num_qubits: usize, p01: f64, p10: f64) -> Result<Self> {
        ReadoutModel::new(vec![(p01, p10); num_qubits])
    }

    pub fn identity(num_qubits: usize) -> Self {
        ReadoutModel { flips: vec![(0.0, 0.0); num_qubits] }
    }

    pub fn num_qubits(&self) -> usize {
        self.flips.len()
    }

    pub fn flips(&self) -> &[(f64, f64)] {
        &self.flips
    }

    /// 2×2 column-stochastic confusion matrix of one qubit,
    /// `M[read][true]`.
    pub fn qubit_confusion(&self, qubit: usize) -> [[f64; 2]; 2] {
        let (p01, p10) = self.flips[qubit];
        [[1.0 - p01, p10], [p01, 1.0 - p10]]
    }

    /// Full `2^q × 2^q` tensor-product confusion matrix.
    pub fn confusion_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::from_element(1, 1, 1.0);
        for q in 0..self.num_qubits() {
            let c = self.qubit_confusion(q);
            let cq = DMatrix::from_row_slice(2, 2, &[c[0][0], c[0][1], c[1][0], c[1][1]]);
            m = m.kronecker(&cq);
        }
        m
    }

    /// Pushes an exact outcome distribution through the readout noise.
    pub fn apply_to_distribution(&self, probs: &[f64]) -> Vec<f64> {
        let n = self.num_qubits();
        let mut cur = probs.to_vec();
        for q in 0..n {
            let shift = bit_shift(q, n);
            let c = self.qubit_confusion(q);
            let mut next = vec![0.0; cur.len()];
            for (i, &v) in cur.iter().enumerate() {
                let bit = (i >> shift) & 1;
                next[i & !(1 << shift)] += c[0][bit] * v;
                next[i | (1 << shift)] += c[1][bit] * v;
            }
            cur = next;
        }
        cur
    }
}

/// Assignment of error channels to gates.
///
/// CX lookups try the per-pair table first (translated through `layout` when
/// one is set) and fall back to the class-wide channel. A gate with no
/// channel on either path is unresolved and running it is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub label: String,
    cx_default: Option<NoiseChannel>,
    cx_pairs: BTreeMap<(usize, usize), NoiseChannel>,
    single_qubit: Option<NoiseChannel>,
    pub readout: Option<ReadoutModel>,
    layout: Option<Vec<usize>>,
}

impl NoiseModel {
    /// A model that resolves nothing; fill it with the `with_*` builders.
    pub fn empty() -> Self {
        NoiseModel {
            label: String::new(),
            cx_default: None,
            cx_pairs: BTreeMap::new(),
            single_qubit: None,
            readout: None,
            layout: None,
        }
    }

    pub fn noiseless() -> Self {
        NoiseModel {
            label: "noiseless".into(),
            cx_default: Some(NoiseChannel::Identity),
            single_qubit: Some(NoiseChannel::Identity),
            ..NoiseModel::empty()
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_cx(mut self, ch: NoiseChannel) -> Result<Self> {
        if !ch.arity_ok(2) {
            return Err(Error::InvalidArgument("CX channel must act on two qubits".into()));
        }
        self.cx_default = Some(ch);
        Ok(self)
    }

    pub fn with_cx_pair(mut self, control: usize, target: usize, ch: NoiseChannel) -> Result<Self> {
        if !ch.arity_ok(2) {
            return Err(Error::InvalidArgument("CX channel must act on two qubits".into()));
        }
        self.cx_pairs.insert((control, target), ch);
        Ok(self)
    }

    pub fn with_single_qubit(mut self, ch: NoiseChannel) -> Result<Self> {
        if !ch.arity_ok(1) {
            return Err(Error::InvalidArgument("single-qubit channel must act on one qubit".into()));
        }
        self.single_qubit = Some(ch);
        Ok(self)
    }

    pub fn with_readout(mut self, readout: ReadoutModel) -> Self {
        self.readout = Some(readout);
        self
    }

    /// Maps circuit qubit `i` to device qubit `layout[i]` for per-pair lookups.
    pub fn with_layout(mut self, layout: Vec<usize>) -> Self {
        self.layout = Some(layout);
        self
    }

    pub fn cx_pairs(&self) -> &BTreeMap<(usize, usize), NoiseChannel> {
        &self.cx_pairs
    }

    pub fn channel_for(&self, gate: &Gate) -> Result<&NoiseChannel> {
        let found = match *gate {
            Gate::Cx { control, target } => {
                let key = match &self.layout {
                    Some(l) => (l.get(control).copied(), l.get(target).copied()),
                    None => (Some(control), Some(target)),
                };
                let pair = match key {
                    (Some(c), Some(t)) => self.cx_pairs.get(&(c, t)),
                    _ => None,
                };
                pair.or(self.cx_default.as_ref())
            }
            _ => self.single_qubit.as_ref(),
        };
        found.ok_or_else(|| Error::UnresolvedGate(gate.to_string()))
    }

    /// Same model without readout error.
    pub fn without_readout(&self) -> Self {
        NoiseModel { readout: None, ..self.clone() }
    }
}

/// Two-qubit depolarizing `cx_rate` after every CX and one-qubit
/// depolarizing `cx_rate / 10` after every single-qubit gate; ideal readout.
pub fn build_standard_model(cx_rate: f64) -> Result<NoiseModel> {
    check_probability(cx_rate, "CX error rate")?;
    NoiseModel::empty()
        .with_label(format!("depolarizing cx={cx_rate}"))
        .with_cx(NoiseChannel::depolarizing(cx_rate)?)?
        .with_single_qubit(NoiseChannel::depolarizing(cx_rate / 10.0)?)
}

/// Register-wide depolarizing `p` after every CX, noiseless single-qubit
/// gates. Under this model every folded circuit is exactly `Λ_{p'} ∘ U`.
pub fn global_depolarizing_cx_model(p: f64) -> Result<NoiseModel> {
    NoiseModel::empty()
        .with_label(format!("global depolarizing cx={p}"))
        .with_cx(NoiseChannel::global_depolarizing(p)?)?
        .with_single_qubit(NoiseChannel::Identity)
}

/// Coherent `exp(−i θ/2 Z⊗Z)` after every CX, noiseless single-qubit gates.
pub fn coherent_cx_model(angle: f64) -> Result<NoiseModel> {
    NoiseModel::empty()
        .with_label(format!("coherent zz={angle}"))
        .with_cx(NoiseChannel::Kraus(coherent_error(angle, CoherentAxis::ZZ)?))?
        .with_single_qubit(NoiseChannel::Identity)
}

/// Per-pair CX error rates from a device calibration table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    rates: BTreeMap<(usize, usize), f64>,
}

/// Parses CSV with header `pair,gate_error`, pairs written
/// `<control>_<target>`.
pub fn load_calibration(text: &str) -> Result<Calibration> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Calibration(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Calibration(format!("missing column {name:?}")))
    };
    let pair_col = col("pair")?;
    let err_col = col("gate_error")?;

    let mut rates = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::Calibration(format!("line {line}: {e}")))?;
        let field = |c: usize| record.get(c).unwrap_or("");
        let pair = parse_pair(field(pair_col))
            .ok_or_else(|| Error::Calibration(format!("line {line}: malformed pair {:?}", field(pair_col))))?;
        let rate: f64 = field(err_col)
            .parse()
            .map_err(|_| Error::Calibration(format!("line {line}: malformed gate_error {:?}", field(err_col))))?;
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::Calibration(format!("line {line}: gate_error {rate} outside [0, 1]")));
        }
        if rates.insert(pair, rate).is_some() {
            return Err(Error::Calibration(format!("line {line}: duplicate pair {}_{}", pair.0, pair.1)));
        }
    }
    if rates.is_empty() {
        return Err(Error::Calibration("no calibration rows".into()));
    }
    Ok(Calibration { rates })
}

fn parse_pair(s: &str) -> Option<(usize, usize)> {
    let (a, b) = s.split_once('_')?;
    let pair = (a.parse().ok()?, b.parse().ok()?);
    (pair.0 != pair.1).then_some(pair)
}

impl Calibration {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        load_calibration(&text)
    }

    pub fn rates(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.rates
    }

    pub fn rate(&self, control: usize, target: usize) -> Option<f64> {
        self.rates.get(&(control, target)).copied()
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn median(&self) -> f64 {
        let mut v: Vec<f64> = self.rates.values().copied().collect();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    }

    pub fn min(&self) -> f64 {
        self.rates.values().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.rates.values().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Device-inspired model: two-qubit depolarizing at each pair's reported
    /// rate, noiseless single-qubit gates and readout. CX pairs missing from
    /// the table are unresolved.
    pub fn noise_model(&self) -> Result<NoiseModel> {
        let mut model = NoiseModel::empty()
            .with_label("calibration")
            .with_single_qubit(NoiseChannel::Identity)?;
        for (&(c, t), &rate) in &self.rates {
            model = model.with_cx_pair(c, t, NoiseChannel::depolarizing(rate)?)?;
        }
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, ONE};

    fn zero_state(n: usize) -> CMatrix {
        let d = 1 << n;
        let mut m = CMatrix::zeros(d, d);
        m[(0, 0)] = ONE;
        m
    }

    #[test]
    fn depolarizing_kraus_sets() {
        let ch = depolarizing_channel(0.0, 1).unwrap();
        assert_eq!(ch.operators().len(), 1);
        assert!(max_abs_diff(&ch.operators()[0], &linalg::identity(2)) < 1e-15);

        let full = depolarizing_channel(1.0, 1).unwrap();
        let out = full.apply(&zero_state(1), &[0], 1);
        assert!(max_abs_diff(&out, &linalg::identity(2).map(|z| z * 0.5)) < 1e-12);

        let p = 0.3;
        let ch = depolarizing_channel(p, 1).unwrap();
        let mut expect = zero_state(1).map(|z| z * (1.0 - p));
        expect[(0, 0)] += Complex64::from(p / 2.0);
        expect[(1, 1)] += Complex64::from(p / 2.0);
        assert!(max_abs_diff(&ch.apply(&zero_state(1), &[0], 1), &expect) < 1e-12);

        assert!(depolarizing_channel(1.5, 1).is_err());
        assert!(depolarizing_channel(-0.1, 2).is_err());
    }

    #[test]
    fn closed_form_depolarizing_matches_kraus() {
        let n = 3;
        let mut rng = crate::seed::rng_from(&[11]);
        let rho = crate::simulator::tests::random_density(n, &mut rng);
        for qubits in [vec![1], vec![0, 2], vec![2, 1]] {
            let kraus = depolarizing_channel(0.37, qubits.len()).unwrap();
            let a = kraus.apply(&rho, &qubits, n);
            let b = NoiseChannel::Depolarizing { p: 0.37 }.apply(&rho, &qubits, n);
            assert!(max_abs_diff(&a, &b) < 1e-12);
        }
        let kraus = depolarizing_channel(0.2, 3).unwrap();
        let a = kraus.apply(&rho, &[0, 1, 2], n);
        let b = NoiseChannel::GlobalDepolarizing { p: 0.2 }.apply(&rho, &[0], n);
        assert!(max_abs_diff(&a, &b) < 1e-12);
    }

    #[test]
    fn pauli_channels() {
        let id = pauli_channel(&[(PauliString::parse("II").unwrap(), 1.0)]).unwrap();
        let rho = zero_state(2);
        assert!(max_abs_diff(&id.apply(&rho, &[0, 1], 2), &rho) < 1e-15);

        let p = 0.2;
        let flip = pauli_channel(&[
            (PauliString::parse("I").unwrap(), 1.0 - p),
            (PauliString::parse("X").unwrap(), p),
        ])
        .unwrap();
        let out = flip.apply(&zero_state(1), &[0], 1);
        assert!((out[(0, 0)].re - (1.0 - p)).abs() < 1e-15);
        assert!((out[(1, 1)].re - p).abs() < 1e-15);

        assert!(pauli_channel(&[(PauliString::parse("X").unwrap(), -0.1)]).is_err());
        assert!(pauli_channel(&[(PauliString::parse("X").unwrap(), 0.9)]).is_err());
    }

    #[test]
    fn pauli_channel_ptm_is_diagonal_and_symmetric() {
        let probs: Vec<_> = PauliString::all(2)
            .into_iter()
            .enumerate()
            .map(|(i, p)| (p, if i == 0 { 0.85 } else { 0.01 }))
            .collect();
        let ch = pauli_channel(&probs).unwrap();
        let r = pauli_transfer_matrix(&ch);
        for i in 0..16 {
            for j in 0..16 {
                if i != j {
                    assert!(r[(i, j)].abs() < 1e-12);
                }
                assert!((r[(i, j)] - r[(j, i)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn coherent_errors() {
        let id = coherent_error(0.0, CoherentAxis::ZZ).unwrap();
        assert!(max_abs_diff(&id.operators()[0], &linalg::identity(4)) < 1e-15);
        let x = coherent_error(std::f64::consts::PI, CoherentAxis::X).unwrap();
        assert!(linalg::diff_up_to_phase(&x.operators()[0], &Pauli::X.matrix()) < 1e-15);
    }

    #[test]
    fn standard_model_rates() {
        let m = build_standard_model(0.01).unwrap();
        let single = m.channel_for(&Gate::sx(0)).unwrap();
        assert_eq!(single, &NoiseChannel::Depolarizing { p: 0.001 });
        assert_eq!(m.channel_for(&Gate::cx(0, 1)).unwrap(), &NoiseChannel::Depolarizing { p: 0.01 });
        assert!(m.readout.is_none());
        assert!(build_standard_model(1.2).is_err());
        let zero = build_standard_model(0.0).unwrap();
        assert_eq!(zero.channel_for(&Gate::cx(0, 1)).unwrap(), &NoiseChannel::Identity);
    }

    #[test]
    fn calibration_parsing() {
        let cal = load_calibration("pair,gate_error\n4_7, 0.00542\n7_4,0.00542\n").unwrap();
        assert_eq!(cal.rate(4, 7), Some(0.00542));
        let model = cal.noise_model().unwrap().with_layout(vec![4, 7, 6]);
        assert_eq!(model.channel_for(&Gate::cx(0, 1)).unwrap(), &NoiseChannel::Depolarizing { p: 0.00542 });
        assert!(matches!(model.channel_for(&Gate::cx(1, 2)), Err(Error::UnresolvedGate(_))));

        assert!(load_calibration("").is_err());
        assert!(load_calibration("pair,gate_error\n").is_err());
        assert!(load_calibration("pair,gate_error\n4-7,0.1\n").is_err());
        assert!(load_calibration("pair,gate_error\n4_7,abc\n").is_err());
        assert!(load_calibration("pair,gate_error\n4_7,0.1\n4_7,0.2\n").is_err());
    }

    #[test]
    fn readout_confusion() {
        let rm = ReadoutModel::uniform(2, 0.1, 0.2).unwrap();
        let m = rm.confusion_matrix();
        let probs = [0.4, 0.3, 0.2, 0.1];
        let via_matrix = &m * nalgebra::DVector::from_column_slice(&probs);
        let via_tensor = rm.apply_to_distribution(&probs);
        for (a, b) in via_matrix.iter().zip(&via_tensor) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(ReadoutModel::uniform(1, 0.5, 0.0).is_err());
    }
}
