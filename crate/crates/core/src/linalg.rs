//! Dense complex linear algebra helpers shared by the simulator and the
//! channel constructors.
//!
//! Basis convention: qubit 0 is the most significant bit of a basis index, so
//! the bitstring `q0 q1 … q(n-1)` read left to right is the binary expansion
//! of the index and `A ⊗ B` puts `A` on the lower-numbered qubit.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type Mat2 = Matrix2<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn mat2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Mat2 {
    Mat2::new(a, b, c, d)
}

pub fn to_dynamic(m: &Mat2) -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| m[(i, j)])
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Bit position (from the least significant end) of `qubit` in an index over
/// `num_qubits` qubits.
#[inline]
pub fn bit_shift(qubit: usize, num_qubits: usize) -> usize {
    num_qubits - 1 - qubit
}

/// Value of `qubit` in basis index `index`.
#[inline]
pub fn qubit_bit(index: usize, qubit: usize, num_qubits: usize) -> usize {
    (index >> bit_shift(qubit, num_qubits)) & 1
}

/// Multiplies `target` on the left by `op` acting on `qubits` (identity on the
/// rest). `op` is `2^k × 2^k` with `qubits[0]` as its most significant factor.
pub fn apply_left(op: &CMatrix, qubits: &[usize], num_qubits: usize, target: &CMatrix) -> CMatrix {
    let k = qubits.len();
    let sub = 1usize << k;
    debug_assert_eq!(op.nrows(), sub);
    let dim = 1usize << num_qubits;
    debug_assert_eq!(target.nrows(), dim);

    let shifts: Vec<usize> = qubits.iter().map(|&q| bit_shift(q, num_qubits)).collect();
    let mask: usize = shifts.iter().map(|s| 1usize << s).sum();
    let offsets: Vec<usize> = (0..sub)
        .map(|l| {
            (0..k)
                .filter(|&j| (l >> (k - 1 - j)) & 1 == 1)
                .map(|j| 1usize << shifts[j])
                .sum()
        })
        .collect();

    let ncols = target.ncols();
    let mut out = CMatrix::zeros(dim, ncols);
    let mut gathered = vec![ZERO; sub];
    for base in (0..dim).filter(|i| i & mask == 0) {
        for col in 0..ncols {
            for (g, off) in gathered.iter_mut().zip(&offsets) {
                *g = target[(base + off, col)];
            }
            for r in 0..sub {
                let mut acc = ZERO;
                for (cidx, g) in gathered.iter().enumerate() {
                    acc += op[(r, cidx)] * g;
                }
                out[(base + offsets[r], col)] = acc;
            }
        }
    }
    out
}

/// `op · m · op†` with `op` embedded on `qubits`.
pub fn conjugate(op: &CMatrix, qubits: &[usize], num_qubits: usize, m: &CMatrix) -> CMatrix {
    let left = apply_left(op, qubits, num_qubits, m);
    apply_left(op, qubits, num_qubits, &left.adjoint()).adjoint()
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b))
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `max |a − e^{iφ} b|` minimised over the global phase `φ`, where the phase
/// is taken from the largest entry of `b`.
pub fn diff_up_to_phase(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    let (idx, _) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("non-empty matrix");
    let bv = b.as_slice()[idx];
    let av = a.as_slice()[idx];
    if bv.norm() == 0.0 {
        return max_abs(a);
    }
    let phase = av / bv;
    let phase = if phase.norm() > 0.0 { phase / phase.norm() } else { ONE };
    max_abs(&(a - b.map(|z| z * phase)))
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(&(m.adjoint() * m), &identity(m.nrows())) <= tol
}

pub fn pure_state(psi: &CVector) -> CMatrix {
    psi * psi.adjoint()
}

pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}
