//! Grover and HHL benchmark circuits in the `{RZ, SX, X, CX}` basis.
//!
//! Both circuits assume a linear nearest-neighbour coupling map. Logical
//! operations (H, T, RY, controlled rotations) are lowered to basis gates
//! here; consecutive RZ rotations on a qubit are merged.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, Observable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkName {
    Grover,
    Hhl,
}

impl BenchmarkName {
    pub fn spec(self) -> BenchmarkSpec {
        match self {
            BenchmarkName::Grover => grover_benchmark(),
            BenchmarkName::Hhl => hhl_benchmark(),
        }
    }
}

impl fmt::Display for BenchmarkName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchmarkName::Grover => "grover",
            BenchmarkName::Hhl => "hhl",
        })
    }
}

impl FromStr for BenchmarkName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "grover" => Ok(BenchmarkName::Grover),
            "hhl" => Ok(BenchmarkName::Hhl),
            other => Err(Error::InvalidArgument(format!("unknown benchmark {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub name: BenchmarkName,
    pub circuit: Circuit,
    pub observable: Observable,
    pub ideal_value: f64,
    pub measured_qubits: Vec<usize>,
}

/// Logical operations used to describe the benchmarks before lowering.
#[derive(Debug, Clone, Copy)]
enum Op {
    H(usize),
    Rz(usize, f64),
    Ry(usize, f64),
    X(usize),
    Cx(usize, usize),
}

impl Op {
    fn inverse(self) -> Op {
        match self {
            Op::Rz(q, a) => Op::Rz(q, -a),
            Op::Ry(q, a) => Op::Ry(q, -a),
            other => other,
        }
    }
}

fn t(q: usize) -> Op {
    Op::Rz(q, PI / 4.0)
}

fn tdg(q: usize) -> Op {
    Op::Rz(q, -PI / 4.0)
}

/// Controlled-RX(θ) as `H_t · CRZ(θ) · H_t`.
fn crx(c: usize, t: usize, theta: f64) -> Vec<Op> {
    let mut ops = vec![Op::H(t)];
    ops.extend(crz(c, t, theta));
    ops.push(Op::H(t));
    ops
}

fn crz(c: usize, t: usize, theta: f64) -> Vec<Op> {
    vec![Op::Rz(t, theta / 2.0), Op::Cx(c, t), Op::Rz(t, -theta / 2.0), Op::Cx(c, t)]
}

fn cry(c: usize, t: usize, theta: f64) -> Vec<Op> {
    vec![Op::Ry(t, theta / 2.0), Op::Cx(c, t), Op::Ry(t, -theta / 2.0), Op::Cx(c, t)]
}

/// Controlled phase `diag(1, 1, 1, e^{iφ})` up to global phase.
fn cphase(a: usize, b: usize, phi: f64) -> Vec<Op> {
    vec![Op::Rz(a, phi / 2.0), Op::Rz(b, phi / 2.0), Op::Cx(a, b), Op::Rz(b, -phi / 2.0), Op::Cx(a, b)]
}

fn swap(a: usize, b: usize) -> Vec<Op> {
    vec![Op::Cx(a, b), Op::Cx(b, a), Op::Cx(a, b)]
}

struct Lowering {
    gates: Vec<Gate>,
    last_on: Vec<Option<usize>>,
}

impl Lowering {
    fn new(n: usize) -> Self {
        Lowering { gates: Vec::new(), last_on: vec![None; n] }
    }

    fn push(&mut self, gate: Gate) {
        if let Gate::Rz { qubit, angle } = gate {
            if let Some(i) = self.last_on[qubit] {
                if let Gate::Rz { angle: prev, .. } = self.gates[i] {
                    // RZ(θ + 2π) = −RZ(θ): keep the angle in (−π, π].
                    let mut sum = (prev + angle).rem_euclid(2.0 * PI);
                    if sum > PI {
                        sum -= 2.0 * PI;
                    }
                    self.gates[i] = Gate::rz(qubit, sum);
                    return;
                }
            }
        }
        let index = self.gates.len();
        for q in gate.qubits() {
            self.last_on[q] = Some(index);
        }
        self.gates.push(gate);
    }

    fn op(&mut self, op: Op) {
        match op {
            // H ≅ RZ(π/2) SX RZ(π/2).
            Op::H(q) => {
                self.push(Gate::rz(q, PI / 2.0));
                self.push(Gate::sx(q));
                self.push(Gate::rz(q, PI / 2.0));
            }
            Op::Rz(q, a) => self.push(Gate::rz(q, a)),
            // RY(θ) = SX† RZ(θ) SX, with SX† = X·SX.
            Op::Ry(q, a) => {
                self.push(Gate::sx(q));
                self.push(Gate::rz(q, a));
                self.push(Gate::sx(q));
                self.push(Gate::x(q));
            }
            Op::X(q) => self.push(Gate::x(q)),
            Op::Cx(c, t) => self.push(Gate::cx(c, t)),
        }
    }

    fn finish(self, n: usize, label: &str) -> Circuit {
        let gates = self.gates.into_iter().filter(|g| !matches!(g, Gate::Rz { angle, .. } if *angle == 0.0));
        Circuit::from_gates(n, gates).expect("benchmark gates are valid").with_label(label)
    }
}

fn lower(n: usize, ops: &[Op], label: &str) -> Circuit {
    let mut l = Lowering::new(n);
    for &op in ops {
        l.op(op);
    }
    l.finish(n, label)
}

/// One Grover iteration on three qubits marking `101` and `011`.
///
/// The oracle `X`-free phase flip is `CX(0,1) CZ(1,2) CX(0,1)`. The diffuser's
/// CCZ uses target qubit 1 so every CX is nearest-neighbour; one SWAP of
/// qubits 0 and 1 routes the final `CX(0,2)` pair, and its first CX cancels
/// the preceding one. The swap is left in place because the marked set is
/// symmetric under exchanging qubits 0 and 1. Ten CX gates in total.
pub fn grover_benchmark() -> BenchmarkSpec {
    let mut ops = Vec::new();
    ops.extend((0..3).map(Op::H));
    // Oracle.
    ops.extend([Op::Cx(0, 1), Op::H(2), Op::Cx(1, 2), Op::H(2), Op::Cx(0, 1)]);
    // Diffuser.
    ops.extend((0..3).map(Op::H));
    ops.extend((0..3).map(Op::X));
    ops.extend([
        Op::Cx(2, 1),
        tdg(1),
        Op::Cx(0, 1),
        t(1),
        Op::Cx(2, 1),
        tdg(1),
        t(2),
        Op::Cx(1, 0),
        Op::Cx(0, 1),
        t(0),
        Op::Cx(1, 2),
        t(1),
        tdg(2),
        Op::Cx(1, 2),
    ]);
    ops.extend((0..3).map(Op::X));
    ops.extend((0..3).map(Op::H));

    BenchmarkSpec {
        name: BenchmarkName::Grover,
        circuit: lower(3, &ops, "grover"),
        observable: Observable::projector(3, &["101", "011"]).expect("valid projector"),
        ideal_value: 1.0,
        measured_qubits: vec![0, 1, 2],
    }
}

/// HHL for `B = [[1, −1/3], [−1/3, 1]]`, `b = (1, 0)` on a linear chain.
///
/// Initial layout: clock qubits on 0 and 2, system on 1, ancilla on 3. With
/// `t = 3π/4` the eigenvalues 2/3 and 4/3 give clock values 1 and 2. Since
/// `exp(2iBt) = −X`, the doubled controlled evolution is `Z` on the clock
/// plus one CX. A SWAP of qubits 0 and 1 brings the clocks together for the
/// inverse QFT and is undone during uncomputation. Eighteen CX gates in
/// total; the ancilla reads 1 with probability 5/8.
pub fn hhl_benchmark() -> BenchmarkSpec {
    let time = 3.0 * PI / 4.0;
    let (c0, s, c1, anc) = (0, 1, 2, 3);

    let mut qpe = vec![Op::H(c0), Op::H(c1)];
    // Controlled e^{2iBt} = controlled (−X), from clock c1.
    qpe.extend([Op::Rz(c1, PI), Op::Cx(c1, s)]);
    // Controlled e^{iBt} = P(t) on the control and CRX(2t/3).
    qpe.push(Op::Rz(c0, time));
    qpe.extend(crx(c0, s, 2.0 * time / 3.0));
    // Route: clock c0 moves to qubit 1, the system to qubit 0.
    qpe.extend(swap(c0, s));
    let c0_routed = s;
    // Inverse QFT; afterwards c1 holds the low bit and c0 the high bit.
    qpe.push(Op::H(c1));
    qpe.extend(cphase(c1, c0_routed, -PI / 2.0));
    qpe.push(Op::H(c0_routed));

    // Clock value 1 → RY(π), value 2 → RY(π/3): sin of half-angle ∝ 1/λ.
    let mut rotation = vec![Op::Ry(anc, PI / 3.0)];
    rotation.extend(cry(c1, anc, 2.0 * PI / 3.0));

    let mut ops = qpe.clone();
    ops.extend(rotation);
    ops.extend(qpe.iter().rev().map(|op| op.inverse()));

    BenchmarkSpec {
        name: BenchmarkName::Hhl,
        circuit: lower(4, &ops, "hhl"),
        observable: Observable::qubit_one(4, anc),
        ideal_value: 5.0 / 8.0,
        measured_qubits: vec![anc],
    }
}

/// `‖x‖` of the HHL instance from the ancilla probability.
pub fn hhl_solution_norm(expval: f64) -> Result<f64> {
    if !(expval >= 0.0) {
        return Err(Error::InvalidArgument(format!("ancilla probability {expval} is negative")));
    }
    Ok(1.5 * expval.sqrt())
}
