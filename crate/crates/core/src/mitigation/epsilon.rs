//! Error-strength estimation from the inverted-circuit return probability.
//!
//! With `ρ = (1 − ε)|ψ⟩⟨ψ| + εσ` and the analogous decomposition of the
//! dual state, the all-zeros probability of `U` followed by `U†` is
//! `P₀ = (1 − ε)² + aε²` with `a = tr(σσ̃)`. Solving for `ε` gives the
//! general branch below; when `P₀ ≤ a` the quadratic has no unique root in
//! `[0, 1]` and the `a = 1` form `(1 − P₀)/(1 + P₀)` is used instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonBranch {
    General,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonEstimate {
    pub p0: f64,
    pub epsilon: f64,
    pub branch: EpsilonBranch,
    pub a_used: f64,
}

/// `(1 − √(P₀ − a(1 − P₀))) / (1 + a)`, valid for `P₀ > a`.
pub fn epsilon_general(p0: f64, a: f64) -> Result<f64> {
    if !(p0 > a) || !(a >= 0.0) {
        return Err(Error::NoUniqueSolution { p0, a });
    }
    Ok((1.0 - (p0 - a * (1.0 - p0)).sqrt()) / (1.0 + a))
}

/// Estimates `ε` for a `q`-qubit circuit assuming `a = 2^−q`.
pub fn estimate_epsilon(p0: f64, num_qubits: usize) -> Result<EpsilonEstimate> {
    if p0.is_nan() {
        return Err(Error::InvalidProbability("P0 is NaN".into()));
    }
    let p0 = p0.clamp(0.0, 1.0);
    let a = 0.5f64.powi(num_qubits as i32);
    let (epsilon, branch) = if p0 > a {
        (epsilon_general(p0, a)?, EpsilonBranch::General)
    } else {
        ((1.0 - p0) / (1.0 + p0), EpsilonBranch::Degenerate)
    };
    Ok(EpsilonEstimate { p0, epsilon: epsilon.clamp(0.0, 1.0), branch, a_used: a })
}

/// `a` of a fully depolarized `q`-qubit error state, `1/(2^q − 1)`.
pub fn depolarizing_a(num_qubits: usize) -> f64 {
    1.0 / ((1u64 << num_qubits) as f64 - 1.0)
}
