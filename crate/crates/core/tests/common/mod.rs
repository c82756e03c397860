//! Reference implementations shared by the integration tests.
//!
//! The superoperator oracle embeds every operator into the full Hilbert
//! space by explicit index arithmetic and applies channels as
//! `vec(KρK†) = (K̄ ⊗ K) vec(ρ)` on column-stacked vectors. It shares no
//! code with the simulator's in-place kernels.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use zne_core::circuit::{cnot_pauli_conjugation, Circuit, Gate, PauliString};
use zne_core::noise::{depolarizing_channel, NoiseChannel, NoiseModel};

pub type CMatrix = DMatrix<Complex64>;

/// `op` acting on `qubits` (q0 is the most significant bit) of an
/// `n`-qubit register.
pub fn embed(op: &CMatrix, qubits: &[usize], n: usize) -> CMatrix {
    let dim = 1 << n;
    let k = qubits.len();
    let bit = |index: usize, q: usize| (index >> (n - 1 - q)) & 1;
    let sub = |index: usize| qubits.iter().fold(0, |acc, &q| (acc << 1) | bit(index, q));
    let rest_mask: usize = (0..n).filter(|q| !qubits.contains(q)).map(|q| 1 << (n - 1 - q)).sum();
    assert_eq!(op.nrows(), 1 << k);
    CMatrix::from_fn(dim, dim, |i, j| {
        if i & rest_mask == j & rest_mask { op[(sub(i), sub(j))] } else { Complex64::new(0.0, 0.0) }
    })
}

/// Column-stacking superoperator `Σ K̄ ⊗ K` of full-space Kraus operators.
pub fn superoperator(ops: &[CMatrix]) -> CMatrix {
    let d = ops[0].nrows();
    let mut s = CMatrix::zeros(d * d, d * d);
    for k in ops {
        s += k.map(|z| z.conj()).kronecker(k);
    }
    s
}

pub fn apply_super(s: &CMatrix, rho: &CMatrix) -> CMatrix {
    let d = rho.nrows();
    let v = DVector::from_column_slice(rho.as_slice());
    let out = s * v;
    CMatrix::from_column_slice(d, d, out.as_slice())
}

/// Full-space Kraus operators of the noise that follows `gate`.
pub fn noise_kraus(nm: &NoiseModel, gate: &Gate, n: usize) -> Vec<CMatrix> {
    let qubits = gate.qubits();
    match nm.channel_for(gate).unwrap() {
        NoiseChannel::Identity => vec![CMatrix::identity(1 << n, 1 << n)],
        NoiseChannel::Kraus(ch) => ch.operators().iter().map(|k| embed(k, &qubits, n)).collect(),
        NoiseChannel::Depolarizing { p } => depolarizing_channel(*p, qubits.len())
            .unwrap()
            .operators()
            .iter()
            .map(|k| embed(k, &qubits, n))
            .collect(),
        NoiseChannel::GlobalDepolarizing { p } => {
            let all: Vec<usize> = (0..n).collect();
            depolarizing_channel(*p, n).unwrap().operators().iter().map(|k| embed(k, &all, n)).collect()
        }
    }
}

/// Noisy evolution of `|0…0⟩` by repeated superoperator products.
pub fn oracle_run(c: &Circuit, nm: &NoiseModel) -> CMatrix {
    let n = c.num_qubits();
    let d = 1 << n;
    let mut rho = CMatrix::zeros(d, d);
    rho[(0, 0)] = Complex64::new(1.0, 0.0);
    for g in c.gates() {
        let u = embed(&g.matrix(), &g.qubits(), n);
        rho = apply_super(&superoperator(&[u]), &rho);
        rho = apply_super(&superoperator(&noise_kraus(nm, g, n)), &rho);
    }
    rho
}

pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Random circuit on 2 to `max_qubits` qubits over the native gate set.
pub fn random_circuit(rng: &mut impl Rng, max_qubits: usize) -> Circuit {
    let n = rng.random_range(2..=max_qubits);
    let mut c = Circuit::new(n);
    for _ in 0..rng.random_range(8..25) {
        match rng.random_range(0..4) {
            0 => {
                c.rz(rng.random_range(0..n), rng.random_range(-3.0..3.0));
            }
            1 => {
                c.sx(rng.random_range(0..n));
            }
            2 => {
                c.x(rng.random_range(0..n));
            }
            _ => {
                let a = rng.random_range(0..n);
                let b = (a + rng.random_range(1..n)) % n;
                c.cx(a, b);
            }
        }
    }
    c
}

/// Two-qubit Pauli error weights with `p_i = p_π(i)`, where `π` is the
/// conjugation of Paulis by CX. `scale` sets the size of each weight.
pub fn symmetric_pauli_weights(scale: f64) -> Vec<(PauliString, f64)> {
    let all = PauliString::all(2);
    let mut w = vec![0.0; 16];
    for p in &all {
        if p.is_identity() {
            continue;
        }
        let v = scale * (1 + p.index() % 3) as f64;
        w[p.index()] = v;
        w[cnot_pauli_conjugation(p).index()] = v;
    }
    w[0] = 1.0 - w.iter().sum::<f64>();
    all.into_iter().zip(w).collect()
}

/// Two-qubit Pauli error weights `scale·i` for the `i`-th Pauli.
pub fn asymmetric_pauli_weights(scale: f64) -> Vec<(PauliString, f64)> {
    let all = PauliString::all(2);
    let mut w: Vec<f64> = (0..16).map(|i| scale * i as f64).collect();
    w[0] = 1.0 - w.iter().sum::<f64>();
    all.into_iter().zip(w).collect()
}
