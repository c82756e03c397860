//! Extrapolation fits.
//!
//! The exponential model `a1·e^(−a2·λ) + a3` is fitted with `a1`, `a3` held
//! inside the observable's range `[A_min, A_max]` through a sigmoid
//! reparameterization and `a2 = exp(u2) > 0`. A small Levenberg–Marquardt
//! solver runs from eight starting points and keeps the best. Residuals are
//! unweighted; the covariance is `s²(JᵀJ)⁻¹` in the original parameters.

use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitModel {
    Exponential,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    /// `[a1, a2, a3]` for the exponential model, `[slope, intercept]` for the
    /// linear one.
    pub params: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    pub zero_noise_value: f64,
    pub zero_noise_std: f64,
    pub ssr: f64,
    /// Set when an exponential fit failed and a linear fit over `λ` was used.
    pub fallback: bool,
}

impl FitResult {
    /// Model value at abscissa `x`.
    pub fn predict(&self, x: f64) -> f64 {
        match self.model {
            FitModel::Exponential => self.params[0] * (-self.params[1] * x).exp() + self.params[2],
            FitModel::Linear => self.params[0] * x + self.params[1],
        }
    }
}

const STARTS_A2: [f64; 4] = [0.05, 0.2, 0.6, 1.5];
const MAX_ITER: usize = 500;

fn sigmoid(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

fn logit(s: f64) -> f64 {
    (s / (1.0 - s)).ln()
}

struct Problem<'a> {
    points: &'a [(f64, f64)],
    lo: f64,
    hi: f64,
    width: f64,
}

impl Problem<'_> {
    fn params(&self, u: &Vector3<f64>) -> [f64; 3] {
        [self.bounded(u[0]), u[1].exp(), self.bounded(u[2])]
    }

    /// Clamped because `lo + width·1.0` can round one ulp past `hi`.
    fn bounded(&self, u: f64) -> f64 {
        (self.lo + self.width * sigmoid(u)).clamp(self.lo, self.hi)
    }

    fn ssr(&self, u: &Vector3<f64>) -> f64 {
        let [a1, a2, a3] = self.params(u);
        self.points.iter().map(|&(x, y)| (a1 * (-a2 * x).exp() + a3 - y).powi(2)).sum()
    }

    /// `(JᵀJ, Jᵀr, ssr)` in the unconstrained coordinates.
    fn normal_equations(&self, u: &Vector3<f64>) -> (Matrix3<f64>, Vector3<f64>, f64) {
        let [a1, a2, a3] = self.params(u);
        let (s1, s3) = (sigmoid(u[0]), sigmoid(u[2]));
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        let mut ssr = 0.0;
        for &(x, y) in self.points {
            let e = (-a2 * x).exp();
            let r = a1 * e + a3 - y;
            let j = Vector3::new(e * self.width * s1 * (1.0 - s1), -a1 * x * e * a2, self.width * s3 * (1.0 - s3));
            jtj += j * j.transpose();
            jtr += j * r;
            ssr += r * r;
        }
        (jtj, jtr, ssr)
    }

    /// Returns the final point, its SSR and whether the iteration settled.
    fn levenberg_marquardt(&self, mut u: Vector3<f64>) -> (Vector3<f64>, f64, bool) {
        let (mut jtj, mut jtr, mut ssr) = self.normal_equations(&u);
        let mut mu = 1e-3 * jtj.diagonal().max().max(1e-12);
        for _ in 0..MAX_ITER {
            if ssr < 1e-30 || jtr.amax() < 1e-18 {
                return (u, ssr, true);
            }
            let mut damped = jtj;
            for i in 0..3 {
                damped[(i, i)] += mu * jtj[(i, i)].max(1e-12);
            }
            let Some(step) = damped.lu().solve(&(-jtr)) else {
                mu *= 10.0;
                continue;
            };
            let candidate = u + step;
            let new_ssr = self.ssr(&candidate);
            if new_ssr.is_finite() && new_ssr < ssr {
                let improvement = ssr - new_ssr;
                u = candidate;
                (jtj, jtr, ssr) = self.normal_equations(&u);
                mu = (mu / 3.0).max(1e-15);
                if improvement <= 1e-14 * ssr || step.amax() <= 1e-13 * (u.amax() + 1e-13) {
                    return (u, ssr, true);
                }
            } else {
                mu *= 4.0;
                if mu > 1e16 {
                    // No descent direction left: a (possibly boundary) minimum.
                    return (u, ssr, true);
                }
            }
        }
        (u, ssr, false)
    }
}

fn check_points(points: &[(f64, f64)], needed: usize) -> Result<()> {
    if points.len() < needed {
        return Err(Error::TooFewPoints { needed, got: points.len() });
    }
    if let Some(p) = points.iter().find(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite data point {p:?}")));
    }
    Ok(())
}

fn mean_at(points: &[(f64, f64)], x0: f64) -> f64 {
    let (sum, n) = points.iter().filter(|(x, _)| *x == x0).fold((0.0, 0usize), |(s, n), (_, y)| (s + y, n + 1));
    sum / n as f64
}

/// Bounded exponential fit of `(λ, ⟨A⟩)` data; extrapolates to `a1 + a3`.
pub fn fit_exponential(points: &[(f64, f64)], bounds: (f64, f64)) -> Result<FitResult> {
    check_points(points, 3)?;
    let (lo, hi) = bounds;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidArgument(format!("bad bounds [{lo}, {hi}]")));
    }
    let xmin = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let xmax = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if xmin == xmax {
        return Err(Error::DegenerateAbscissa(xmin));
    }

    let ymean = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let spread = points.iter().map(|p| (p.1 - ymean).abs()).fold(0.0, f64::max);
    if spread <= 1e-12 * ymean.abs().max(1.0) || hi == lo {
        // Flat data: a2 = 0 and any split with a1 + a3 = ȳ.
        let a1 = 0.0f64.clamp(lo, hi);
        let a3 = (ymean - a1).clamp(lo, hi);
        return Ok(exponential_result(points, [a1, 0.0, a3]));
    }

    let width = hi - lo;
    let problem = Problem { points, lo, hi, width };
    let interior = |a: f64| {
        let s = ((a - lo) / width).clamp(1e-6, 1.0 - 1e-6);
        logit(s)
    };
    let (y_lo, y_hi) = (mean_at(points, xmin), mean_at(points, xmax));

    let mut best: Option<(Vector3<f64>, f64)> = None;
    let mut any_converged = false;
    for &a2 in &STARTS_A2 {
        let (e_min, e_max) = ((-a2 * xmin).exp(), (-a2 * xmax).exp());
        let a1_two_point = (y_lo - y_hi) / (e_min - e_max);
        let a3_mid = lo + 0.5 * width;
        let starts = [
            (a1_two_point, y_hi - a1_two_point * e_max),
            ((y_lo - a3_mid) / e_min, a3_mid),
        ];
        for (a1, a3) in starts {
            let u0 = Vector3::new(interior(a1), a2.ln(), interior(a3));
            let (u, ssr, converged) = problem.levenberg_marquardt(u0);
            if !ssr.is_finite() {
                continue;
            }
            any_converged |= converged;
            if best.as_ref().is_none_or(|(_, s)| ssr < *s) {
                best = Some((u, ssr));
            }
        }
    }
    match best {
        Some((u, _)) if any_converged => Ok(exponential_result(points, problem.params(&u))),
        _ => Err(Error::FitDidNotConverge("no multistart settled".into())),
    }
}

fn exponential_result(points: &[(f64, f64)], params: [f64; 3]) -> FitResult {
    let [a1, a2, a3] = params;
    let mut jtj = DMatrix::<f64>::zeros(3, 3);
    let mut ssr = 0.0;
    for &(x, y) in points {
        let e = (-a2 * x).exp();
        let j = nalgebra::DVector::from_vec(vec![e, -a1 * x * e, 1.0]);
        jtj += &j * j.transpose();
        ssr += (a1 * e + a3 - y).powi(2);
    }
    let dof = points.len().saturating_sub(3);
    let s2 = if dof > 0 { ssr / dof as f64 } else { f64::NAN };
    let cov = jtj.pseudo_inverse(1e-300).unwrap_or_else(|_| DMatrix::from_element(3, 3, f64::NAN)) * s2;
    let var = cov[(0, 0)] + cov[(2, 2)] + 2.0 * cov[(0, 2)];
    FitResult {
        model: FitModel::Exponential,
        params: params.to_vec(),
        covariance: rows(&cov),
        zero_noise_value: a1 + a3,
        zero_noise_std: if var.is_nan() { f64::NAN } else { var.max(0.0).sqrt() },
        ssr,
        fallback: false,
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Ordinary least squares `y = m·x + b`; extrapolates to the intercept.
pub fn fit_linear(points: &[(f64, f64)]) -> Result<FitResult> {
    check_points(points, 2)?;
    let n = points.len() as f64;
    let xbar = points.iter().map(|p| p.0).sum::<f64>() / n;
    let ybar = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - xbar).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum();
    if !(sxx > 0.0) || points.iter().all(|p| p.0 == points[0].0) {
        return Err(Error::DegenerateAbscissa(points[0].0));
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ssr: f64 = points.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    let dof = points.len() - 2;
    let s2 = if dof > 0 { ssr / dof as f64 } else { f64::NAN };
    let var_slope = s2 / sxx;
    let var_intercept = s2 * (1.0 / n + xbar * xbar / sxx);
    let cov_si = -s2 * xbar / sxx;
    Ok(FitResult {
        model: FitModel::Linear,
        params: vec![slope, intercept],
        covariance: vec![vec![var_slope, cov_si], vec![cov_si, var_intercept]],
        zero_noise_value: intercept,
        zero_noise_std: var_intercept.sqrt(),
        ssr,
        fallback: false,
    })
}

/// Exponential fit, or a linear fit over the same abscissa when the
/// exponential solver does not settle.
pub fn fit_exponential_or_linear(points: &[(f64, f64)], bounds: (f64, f64)) -> Result<FitResult> {
    match fit_exponential(points, bounds) {
        Err(Error::FitDidNotConverge(_)) => {
            let mut fit = fit_linear(points)?;
            fit.fallback = true;
            Ok(fit)
        }
        other => other,
    }
}

/// Error-strength ratio `ε(λ)/ε(1) = (1 − e^(−a2·λ))/(1 − e^(−a2))` implied by
/// exponential decay of the fidelity. Tends to `λ` as `a2 → 0`; negative
/// `a2` (super-linear growth) is evaluated by the same formula.
pub fn scaling_curve(a2: f64, lambda: f64) -> f64 {
    if a2 == 0.0 {
        return lambda;
    }
    (-a2 * lambda).exp_m1() / (-a2).exp_m1()
}

/// `a2` minimising the squared deviation of [`scaling_curve`] from measured
/// `(λ, ε/ε₀)` ratios. The search covers `a2 ∈ [−20, 20]`.
pub fn fit_scaling_rate(points: &[(f64, f64)]) -> Result<f64> {
    check_points(points, 1)?;
    if points.iter().all(|p| p.0 == 1.0) {
        return Err(Error::DegenerateAbscissa(1.0));
    }
    let loss = |a2: f64| points.iter().map(|&(l, r)| (scaling_curve(a2, l) - r).powi(2)).sum::<f64>();
    let (lo, hi, steps) = (-20.0, 20.0, 4000);
    let h = (hi - lo) / steps as f64;
    let best = (0..=steps).map(|i| lo + h * i as f64).min_by(|a, b| loss(*a).total_cmp(&loss(*b))).unwrap();
    // Golden-section refinement inside the bracketing grid cells.
    let (mut a, mut b) = ((best - h).max(lo), (best + h).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..200 {
        if loss(c) < loss(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    Ok(0.5 * (a + b))
}
