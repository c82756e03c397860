use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::circuit::{check_lambda, Circuit, Gate, PauliString, cnot_pauli_conjugation};
use crate::error::Result;
use crate::linalg::{Mat2, ONE};

/// Spectator map for twirling: qubit → neighbours that also receive random
/// Paulis around every CX touching that qubit.
pub type Adjacency = BTreeMap<usize, BTreeSet<usize>>;

/// `U†`: reversed gate order, each gate replaced by its adjoint.
pub fn invert(c: &Circuit) -> Circuit {
    let gates = c.gates().iter().rev().map(Gate::adjoint).collect();
    c.replace_gates(gates)
}

/// Replaces every CX by `lambda` consecutive copies.
pub fn fold_cnots(c: &Circuit, lambda: i64) -> Result<Circuit> {
    let lambda = check_lambda(lambda)?;
    let mut gates = Vec::with_capacity(c.len() + c.cx_count() * (lambda as usize - 1));
    for g in c.gates() {
        if g.is_cx() {
            gates.extend(std::iter::repeat_n(*g, lambda as usize));
        } else {
            gates.push(*g);
        }
    }
    let mut out = c.replace_gates(gates);
    out.set_lambda(lambda)?;
    Ok(out)
}

/// Pauli-twirls every CX, then contracts the resulting single-qubit runs.
///
/// Each CX gets a uniformly random two-qubit Pauli `P` before it and the
/// conjugated `CX·P·CX` after (sign dropped). Spectators listed in
/// `adjacency` for either CX qubit get an independent random Pauli on both
/// sides.
pub fn twirl(c: &Circuit, rng: &mut impl Rng, adjacency: &Adjacency) -> Circuit {
    let all = PauliString::all(2);
    let mut gates = Vec::with_capacity(c.len() * 3);
    for g in c.gates() {
        let Gate::Cx { control, target } = *g else {
            gates.push(*g);
            continue;
        };
        let before = &all[rng.random_range(0..all.len())];
        let after = cnot_pauli_conjugation(before);

        let spectators: BTreeSet<usize> = [control, target]
            .iter()
            .filter_map(|q| adjacency.get(q))
            .flatten()
            .copied()
            .filter(|&q| q != control && q != target && q < c.num_qubits())
            .collect();
        let spectator_paulis: Vec<_> =
            spectators.iter().map(|&q| (q, super::Pauli::random(rng))).collect();

        gates.extend(before.ops[0].gate(control));
        gates.extend(before.ops[1].gate(target));
        gates.extend(spectator_paulis.iter().filter_map(|&(q, p)| p.gate(q)));
        gates.push(*g);
        gates.extend(after.ops[0].gate(control));
        gates.extend(after.ops[1].gate(target));
        gates.extend(spectator_paulis.iter().filter_map(|&(q, p)| p.gate(q)));
    }
    contract_single_qubit_gates(&c.replace_gates(gates))
}

const IDENTITY_TOL: f64 = 1e-12;

/// Merges maximal runs of single-qubit gates on the same qubit into one `U`
/// gate. Runs of one gate are kept as they are; products equal to the
/// identity up to phase are dropped.
pub fn contract_single_qubit_gates(c: &Circuit) -> Circuit {
    struct Run {
        product: Mat2,
        first: Gate,
        len: usize,
    }

    fn flush(run: Option<Run>, qubit: usize, out: &mut Vec<Gate>) {
        let Some(run) = run else { return };
        if run.len == 1 {
            out.push(run.first);
        } else if !is_phase_identity(&run.product) {
            out.push(Gate::u(qubit, run.product));
        }
    }

    let n = c.num_qubits();
    let mut pending: Vec<Option<Run>> = (0..n).map(|_| None).collect();
    let mut out = Vec::with_capacity(c.len());

    for g in c.gates() {
        match *g {
            Gate::Cx { control, target } => {
                for q in [control, target] {
                    flush(pending[q].take(), q, &mut out);
                }
                out.push(*g);
            }
            _ => {
                let q = g.single_qubit().expect("single-qubit gate");
                let m = g.matrix2().expect("single-qubit gate");
                pending[q] = Some(match pending[q].take() {
                    None => Run { product: m, first: *g, len: 1 },
                    Some(run) => Run { product: m * run.product, first: run.first, len: run.len + 1 },
                });
            }
        }
    }
    for (q, run) in pending.into_iter().enumerate() {
        flush(run, q, &mut out);
    }
    c.replace_gates(out)
}

fn is_phase_identity(m: &Mat2) -> bool {
    let phase = m[(0, 0)];
    if (phase.norm() - 1.0).abs() > IDENTITY_TOL {
        return false;
    }
    let scaled = m / phase;
    (scaled[(0, 0)] - ONE).norm() <= IDENTITY_TOL
        && scaled[(0, 1)].norm() <= IDENTITY_TOL
        && scaled[(1, 0)].norm() <= IDENTITY_TOL
        && (scaled[(1, 1)] - ONE).norm() <= IDENTITY_TOL
}
