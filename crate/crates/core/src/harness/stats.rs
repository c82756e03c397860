//! Box-plot statistics and RMSE.
//!
//! Quartiles use linear interpolation between order statistics (Hyndman and
//! Fan type 7, the default of R and NumPy): the `p` quantile of `n` sorted
//! values sits at position `(n − 1)·p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_lo: f64,
    pub whisker_hi: f64,
    pub outliers: Vec<f64>,
    pub count: usize,
}

/// Type-7 quantile of already sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn sorted_finite(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("statistics of an empty sample".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("statistics of a non-finite value".into()));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Median, quartiles and Tukey whiskers (furthest points within
/// 1.5 IQR of the quartiles); everything beyond is an outlier.
pub fn box_stats(values: &[f64]) -> Result<BoxStats> {
    let v = sorted_finite(values)?;
    let q1 = quantile_sorted(&v, 0.25);
    let median = quantile_sorted(&v, 0.5);
    let q3 = quantile_sorted(&v, 0.75);
    let iqr = q3 - q1;
    let (fence_lo, fence_hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let inside = || v.iter().copied().filter(|&x| x >= fence_lo && x <= fence_hi);
    // Quartiles lie inside the fences, so `inside` is never empty.
    let whisker_lo = inside().fold(f64::INFINITY, f64::min);
    let whisker_hi = inside().fold(f64::NEG_INFINITY, f64::max);
    let outliers = v.iter().copied().filter(|&x| x < fence_lo || x > fence_hi).collect();
    Ok(BoxStats { median, q1, q3, whisker_lo, whisker_hi, outliers, count: v.len() })
}

pub fn rmse(values: &[f64], ideal: f64) -> Result<f64> {
    let v = sorted_finite(values)?;
    let mse = v.iter().map(|x| (x - ideal).powi(2)).sum::<f64>() / v.len() as f64;
    Ok(mse.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmseReport {
    pub rmse: f64,
    pub ideal: f64,
    pub runs: usize,
}

impl RmseReport {
    pub fn new(values: &[f64], ideal: f64) -> Result<Self> {
        Ok(RmseReport { rmse: rmse(values, ideal)?, ideal, runs: values.len() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_value() {
        let b = box_stats(&[5.0]).unwrap();
        assert_eq!((b.median, b.q1, b.q3, b.whisker_lo, b.whisker_hi), (5.0, 5.0, 5.0, 5.0, 5.0));
        assert!(b.outliers.is_empty());
    }

    #[test]
    fn one_to_nine() {
        let v: Vec<f64> = (1..=9).map(f64::from).collect();
        let b = box_stats(&v).unwrap();
        assert_eq!((b.median, b.q1, b.q3), (5.0, 3.0, 7.0));
        assert_eq!((b.whisker_lo, b.whisker_hi), (1.0, 9.0));
        assert!(b.outliers.is_empty());
    }

    #[test]
    fn far_point_is_outlier() {
        let b = box_stats(&[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        assert_eq!(b.outliers, vec![100.0]);
        assert_eq!(b.whisker_hi, 4.0);
    }

    #[test]
    fn rmse_examples() {
        assert_eq!(rmse(&[0.3, 0.3], 0.3).unwrap(), 0.0);
        assert!((rmse(&[0.6, 0.65], 0.625).unwrap() - 0.025).abs() < 1e-15);
        assert!((rmse(&[0.7], 0.625).unwrap() - 0.075).abs() < 1e-15);
        assert!(rmse(&[], 0.0).is_err());
        assert!(box_stats(&[]).is_err());
    }

    proptest! {
        #[test]
        fn box_invariants(v in prop::collection::vec(-100.0f64..100.0, 1..60)) {
            let b = box_stats(&v).unwrap();
            prop_assert!(b.q1 <= b.median && b.median <= b.q3);
            let iqr = b.q3 - b.q1;
            prop_assert!(v.contains(&b.whisker_lo) && v.contains(&b.whisker_hi));
            prop_assert!(b.whisker_lo >= b.q1 - 1.5 * iqr && b.whisker_hi <= b.q3 + 1.5 * iqr);
            let expected: usize = v.iter().filter(|&&x| x < b.q1 - 1.5 * iqr || x > b.q3 + 1.5 * iqr).count();
            prop_assert_eq!(b.outliers.len(), expected);
        }

        #[test]
        fn rmse_nonnegative(v in prop::collection::vec(-1.0f64..1.0, 1..30), ideal in -1.0f64..1.0) {
            let r = rmse(&v, ideal).unwrap();
            prop_assert!(r >= 0.0);
            prop_assert_eq!(r == 0.0, v.iter().all(|&x| x == ideal));
        }
    }
}
