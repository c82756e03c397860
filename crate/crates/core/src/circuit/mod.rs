//! Gate-list circuit representation and the transformations both ZNE
//! variants are built from.

mod pauli;
mod text;
mod transform;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, mat2, CMatrix, CVector, Mat2, ONE, ZERO};

pub use pauli::{cnot_pauli_conjugation, Pauli, PauliString};
pub use text::{parse_circuit, serialize_circuit};
pub use transform::{contract_single_qubit_gates, fold_cnots, invert, twirl, Adjacency};

/// Tolerance for the unitarity check on `U` gates.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rz { qubit: usize, angle: f64 },
    Sx { qubit: usize },
    X { qubit: usize },
    Cx { control: usize, target: usize },
    /// Arbitrary single-qubit unitary.
    U { qubit: usize, matrix: Mat2 },
}

impl Gate {
    pub fn rz(qubit: usize, angle: f64) -> Self {
        Gate::Rz { qubit, angle }
    }
    pub fn sx(qubit: usize) -> Self {
        Gate::Sx { qubit }
    }
    pub fn x(qubit: usize) -> Self {
        Gate::X { qubit }
    }
    pub fn cx(control: usize, target: usize) -> Self {
        Gate::Cx { control, target }
    }
    pub fn u(qubit: usize, matrix: Mat2) -> Self {
        Gate::U { qubit, matrix }
    }

    pub fn is_cx(&self) -> bool {
        matches!(self, Gate::Cx { .. })
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cx { control, target } => vec![control, target],
            Gate::Rz { qubit, .. } | Gate::Sx { qubit } | Gate::X { qubit } | Gate::U { qubit, .. } => {
                vec![qubit]
            }
        }
    }

    /// The qubit of a single-qubit gate.
    pub fn single_qubit(&self) -> Option<usize> {
        match *self {
            Gate::Cx { .. } => None,
            Gate::Rz { qubit, .. } | Gate::Sx { qubit } | Gate::X { qubit } | Gate::U { qubit, .. } => {
                Some(qubit)
            }
        }
    }

    /// 2×2 matrix of a single-qubit gate.
    pub fn matrix2(&self) -> Option<Mat2> {
        Some(match *self {
            Gate::Rz { angle, .. } => {
                let h = angle / 2.0;
                mat2(Complex64::from_polar(1.0, -h), ZERO, ZERO, Complex64::from_polar(1.0, h))
            }
            Gate::Sx { .. } => sx_matrix(),
            Gate::X { .. } => mat2(ZERO, ONE, ONE, ZERO),
            Gate::U { matrix, .. } => matrix,
            Gate::Cx { .. } => return None,
        })
    }

    /// Matrix on the gate's own qubits (`2×2` or `4×4`, control first).
    pub fn matrix(&self) -> CMatrix {
        match self.matrix2() {
            Some(m) => linalg::to_dynamic(&m),
            None => cx_matrix(),
        }
    }

    pub fn adjoint(&self) -> Gate {
        match *self {
            Gate::Rz { qubit, angle } => Gate::Rz { qubit, angle: -angle },
            Gate::Sx { qubit } => Gate::U { qubit, matrix: sx_matrix().adjoint() },
            Gate::X { qubit } => Gate::X { qubit },
            Gate::Cx { control, target } => Gate::Cx { control, target },
            Gate::U { qubit, matrix } => Gate::U { qubit, matrix: matrix.adjoint() },
        }
    }

    /// Short class label used in error messages and noise lookups.
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Rz { .. } => "rz",
            Gate::Sx { .. } => "sx",
            Gate::X { .. } => "x",
            Gate::Cx { .. } => "cx",
            Gate::U { .. } => "u",
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= num_qubits {
                return Err(Error::InvalidCircuit(format!(
                    "{} acts on qubit {q}, circuit has {num_qubits}",
                    self.name()
                )));
            }
        }
        match *self {
            Gate::Cx { control, target } if control == target => Err(Error::InvalidCircuit(format!(
                "cx control and target are both {control}"
            ))),
            Gate::Rz { angle, .. } if !angle.is_finite() => {
                Err(Error::InvalidCircuit(format!("rz angle {angle} is not finite")))
            }
            Gate::U { matrix, .. } => {
                let m = linalg::to_dynamic(&matrix);
                if linalg::is_unitary(&m, UNITARY_TOL) {
                    Ok(())
                } else {
                    Err(Error::InvalidCircuit("u matrix is not unitary".into()))
                }
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Cx { control, target } => write!(f, "cx({control},{target})"),
            g => write!(f, "{}@{}", g.name(), g.single_qubit().unwrap_or_default()),
        }
    }
}

pub fn sx_matrix() -> Mat2 {
    let a = c(0.5, 0.5);
    let b = c(0.5, -0.5);
    mat2(a, b, b, a)
}

pub fn cx_matrix() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

/// Ordered gate list over a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    pub label: String,
    lambda: u32,
    pub twirl_id: Option<u32>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new(), label: String::new(), lambda: 1, twirl_id: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn from_gates(num_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut circuit = Circuit::new(num_qubits);
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn set_lambda(&mut self, lambda: u32) -> Result<()> {
        check_lambda(lambda as i64)?;
        self.lambda = lambda;
        Ok(())
    }

    pub fn cx_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cx()).count()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends every gate of `other` (same register).
    pub fn extend_from(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, actual: other.num_qubits });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    // Builder helpers for hand-written circuits; indices are trusted.
    pub fn rz(&mut self, qubit: usize, angle: f64) -> &mut Self {
        self.push(Gate::rz(qubit, angle)).expect("valid rz");
        self
    }
    pub fn sx(&mut self, qubit: usize) -> &mut Self {
        self.push(Gate::sx(qubit)).expect("valid sx");
        self
    }
    pub fn x(&mut self, qubit: usize) -> &mut Self {
        self.push(Gate::x(qubit)).expect("valid x");
        self
    }
    pub fn cx(&mut self, control: usize, target: usize) -> &mut Self {
        self.push(Gate::cx(control, target)).expect("valid cx");
        self
    }

    pub(crate) fn replace_gates(&self, gates: Vec<Gate>) -> Circuit {
        Circuit { gates, ..self.clone() }
    }

    /// Dense ideal unitary (`2^q × 2^q`).
    pub fn unitary(&self) -> CMatrix {
        let dim = 1usize << self.num_qubits;
        let mut u = linalg::identity(dim);
        for g in &self.gates {
            u = linalg::apply_left(&g.matrix(), &g.qubits(), self.num_qubits, &u);
        }
        u
    }
}

pub(crate) fn check_lambda(lambda: i64) -> Result<u32> {
    if lambda < 1 || lambda % 2 == 0 || lambda > u32::MAX as i64 {
        Err(Error::InvalidLambda(lambda))
    } else {
        Ok(lambda as u32)
    }
}

/// Diagonal observable: one real value per computational-basis outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    diagonal: Vec<f64>,
}

impl Observable {
    pub fn new(diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || !diagonal.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "observable length {} is not a power of two",
                diagonal.len()
            )));
        }
        if let Some(v) = diagonal.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("observable entry {v} is not finite")));
        }
        Ok(Observable { diagonal })
    }

    /// Projector onto the listed bitstrings (`q0` leftmost).
    pub fn projector(num_qubits: usize, bitstrings: &[&str]) -> Result<Self> {
        let mut diag = vec![0.0; 1 << num_qubits];
        for s in bitstrings {
            diag[bitstring_index(s, num_qubits)?] = 1.0;
        }
        Observable::new(diag)
    }

    /// `|1⟩⟨1|` on `qubit`, identity elsewhere.
    pub fn qubit_one(num_qubits: usize, qubit: usize) -> Self {
        let diag = (0..1usize << num_qubits)
            .map(|i| linalg::qubit_bit(i, qubit, num_qubits) as f64)
            .collect();
        Observable { diagonal: diag }
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn num_qubits(&self) -> usize {
        self.diagonal.len().trailing_zeros() as usize
    }

    pub fn min(&self) -> f64 {
        self.diagonal.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.diagonal.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `[A_min, A_max]`.
    pub fn bounds(&self) -> (f64, f64) {
        (self.min(), self.max())
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation_pure(&self, psi: &CVector) -> f64 {
        psi.iter().zip(&self.diagonal).map(|(a, v)| a.norm_sqr() * v).sum()
    }
}

/// Basis index of a bitstring written `q0 q1 … q(n-1)`.
pub fn bitstring_index(s: &str, num_qubits: usize) -> Result<usize> {
    if s.len() != num_qubits {
        return Err(Error::InvalidArgument(format!("bitstring {s:?} does not have {num_qubits} bits")));
    }
    s.chars().try_fold(0usize, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        _ => Err(Error::InvalidArgument(format!("bitstring {s:?} contains {ch:?}"))),
    })
}

pub fn index_bitstring(index: usize, num_qubits: usize) -> String {
    (0..num_qubits)
        .map(|q| if linalg::qubit_bit(index, q, num_qubits) == 1 { '1' } else { '0' })
        .collect()
}
