use std::fmt;

use rand::Rng;

use crate::circuit::Gate;
use crate::linalg::{self, c, mat2, CMatrix, Mat2, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Symplectic bits `(x, z)` with `P = i^{x·z} X^x Z^z`.
    fn bits(self) -> (u8, u8) {
        match self {
            Pauli::I => (0, 0),
            Pauli::X => (1, 0),
            Pauli::Y => (1, 1),
            Pauli::Z => (0, 1),
        }
    }

    fn from_bits(x: u8, z: u8) -> Pauli {
        match (x & 1, z & 1) {
            (0, 0) => Pauli::I,
            (1, 0) => Pauli::X,
            (1, 1) => Pauli::Y,
            _ => Pauli::Z,
        }
    }

    pub fn matrix2(self) -> Mat2 {
        match self {
            Pauli::I => mat2(ONE, ZERO, ZERO, ONE),
            Pauli::X => mat2(ZERO, ONE, ONE, ZERO),
            Pauli::Y => mat2(ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO),
            Pauli::Z => mat2(ONE, ZERO, ZERO, -ONE),
        }
    }

    pub fn matrix(self) -> CMatrix {
        linalg::to_dynamic(&self.matrix2())
    }

    pub fn random(rng: &mut impl Rng) -> Pauli {
        Pauli::ALL[rng.random_range(0..4)]
    }

    /// Gate realising this Pauli up to global phase; `None` for identity.
    pub fn gate(self, qubit: usize) -> Option<Gate> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(Gate::x(qubit)),
            Pauli::Z => Some(Gate::rz(qubit, std::f64::consts::PI)),
            Pauli::Y => Some(Gate::u(qubit, Pauli::Y.matrix2())),
        }
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Signed tensor product of single-qubit Paulis; `ops[0]` acts on the first
/// listed qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    pub ops: Vec<Pauli>,
    pub sign: i8,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        PauliString { ops, sign: 1 }
    }

    pub fn identity(n: usize) -> Self {
        PauliString::new(vec![Pauli::I; n])
    }

    pub fn parse(label: &str) -> Option<Self> {
        label
            .chars()
            .map(|ch| match ch {
                'I' => Some(Pauli::I),
                'X' => Some(Pauli::X),
                'Y' => Some(Pauli::Y),
                'Z' => Some(Pauli::Z),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(PauliString::new)
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|&p| p == Pauli::I)
    }

    /// All `4^n` unsigned Pauli strings, `I…I` first.
    pub fn all(n: usize) -> Vec<PauliString> {
        (0..1usize << (2 * n))
            .map(|mut k| {
                let mut ops = vec![Pauli::I; n];
                for slot in ops.iter_mut().rev() {
                    *slot = Pauli::ALL[k & 3];
                    k >>= 2;
                }
                PauliString::new(ops)
            })
            .collect()
    }

    /// Index into [`PauliString::all`] ignoring the sign.
    pub fn index(&self) -> usize {
        self.ops.iter().fold(0, |acc, p| (acc << 2) | *p as usize)
    }

    pub fn unsigned(&self) -> PauliString {
        PauliString::new(self.ops.clone())
    }

    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::identity(1, 1);
        for p in &self.ops {
            m = linalg::kron(&m, &p.matrix());
        }
        if self.sign < 0 {
            m = -m;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        for p in &self.ops {
            write!(f, "{}", p.label())?;
        }
        Ok(())
    }
}

/// `CX · P · CX` for a two-qubit Pauli on (control, target), with its sign.
pub fn cnot_pauli_conjugation(p: &PauliString) -> PauliString {
    assert_eq!(p.len(), 2, "CNOT conjugation needs a two-qubit Pauli");
    let (xc, zc) = p.ops[0].bits();
    let (xt, zt) = p.ops[1].bits();
    // X_c -> X_c X_t, Z_t -> Z_c Z_t; X_t and Z_c are invariant.
    let (xc2, zc2) = (xc, zc ^ zt);
    let (xt2, zt2) = (xc ^ xt, zt);
    // Phases: P = i^{x·z} X^x Z^z before and after.
    let before = (xc * zc + xt * zt) as i32;
    let after = (xc2 * zc2 + xt2 * zt2) as i32;
    let diff = (before - after).rem_euclid(4);
    debug_assert!(diff % 2 == 0);
    let sign = if diff == 0 { 1 } else { -1 } * p.sign;
    PauliString { ops: vec![Pauli::from_bits(xc2, zc2), Pauli::from_bits(xt2, zt2)], sign }
}
