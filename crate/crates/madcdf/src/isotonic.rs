//! Bounded weighted isotonic regression.
//!
//! Solves `min sum w_i (y_i - a_i)^2` subject to
//! `lo <= a_1 <= ... <= a_n <= hi` by pool-adjacent-violators: merge adjacent
//! blocks while their weighted means are out of order, then clamp each block
//! mean into `[lo, hi]`. With constant bounds, clamping the unconstrained
//! isotonic fit is exact, because clipping preserves monotonicity and the
//! normal equations within each block.
//!
//! The solution equals the min-max characterisation
//! `a_i = clamp(max over s<=i of min over t>=i of Av(y[s..=t]), lo, hi)`,
//! which the tests evaluate by brute force.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IsotonicError {
    #[error("weights must be finite and strictly positive")]
    BadWeights,
    #[error("lower bound {lo} exceeds upper bound {hi}")]
    BoundsInverted { lo: f64, hi: f64 },
    #[error("targets and weights have different lengths ({targets} vs {weights})")]
    LengthMismatch { targets: usize, weights: usize },
    #[error("targets must be finite")]
    NonFiniteTarget,
}

/// Validated instance: finite targets, positive weights, ordered bounds.
#[derive(Debug, Clone)]
pub struct IsotonicProblem {
    y: Vec<f64>,
    w: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl IsotonicProblem {
    pub fn new(y: Vec<f64>, w: Vec<f64>, lo: f64, hi: f64) -> Result<Self, IsotonicError> {
        if y.len() != w.len() {
            return Err(IsotonicError::LengthMismatch {
                targets: y.len(),
                weights: w.len(),
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(IsotonicError::NonFiniteTarget);
        }
        if w.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(IsotonicError::BadWeights);
        }
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(IsotonicError::BoundsInverted { lo, hi });
        }
        Ok(IsotonicProblem { y, w, lo, hi })
    }

    pub fn with_equal_weights(y: Vec<f64>, lo: f64, hi: f64) -> Result<Self, IsotonicError> {
        let w = vec![1.0; y.len()];
        IsotonicProblem::new(y, w, lo, hi)
    }

    pub fn targets(&self) -> &[f64] {
        &self.y
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Weighted objective `sum w_i (y_i - a_i)^2` of a candidate fit.
    pub fn objective(&self, a: &[f64]) -> f64 {
        self.y
            .iter()
            .zip(&self.w)
            .zip(a)
            .map(|((&y, &w), &a)| w * (y - a) * (y - a))
            .sum()
    }
}

/// Pool-adjacent-violators fit clamped into the bounds. O(n).
pub fn bounded_isotonic(p: &IsotonicProblem) -> Vec<f64> {
    let n = p.y.len();
    if n == 0 {
        return Vec::new();
    }
    // Blocks as (weighted mean, total weight, count), merged while inverted.
    let mut mean: Vec<f64> = Vec::with_capacity(n);
    let mut weight: Vec<f64> = Vec::with_capacity(n);
    let mut count: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        mean.push(p.y[i]);
        weight.push(p.w[i]);
        count.push(1);
        while mean.len() > 1 {
            let m = mean.len();
            if mean[m - 2] <= mean[m - 1] {
                break;
            }
            let w_merged = weight[m - 2] + weight[m - 1];
            mean[m - 2] = (weight[m - 2] * mean[m - 2] + weight[m - 1] * mean[m - 1]) / w_merged;
            weight[m - 2] = w_merged;
            count[m - 2] += count[m - 1];
            mean.pop();
            weight.pop();
            count.pop();
        }
    }
    let mut out = Vec::with_capacity(n);
    for (m, c) in mean.iter().zip(&count) {
        let clamped = m.max(p.lo).min(p.hi);
        out.extend(std::iter::repeat_n(clamped, *c));
    }
    out
}
