//! Central differences with Richardson extrapolation.
//!
//! The central difference `(f(v+h) - f(v-h)) / (2h)` has error `O(h^2)` with
//! only even powers of `h` in its expansion, so halving the step and forming
//! the triangular array
//!
//! ```text
//! T[k][0] = central_diff(f, v, h0 / 2^k)
//! T[k][j] = (4^j * T[k][j-1] - T[k-1][j-1]) / (4^j - 1)
//! ```
//!
//! cancels successive error terms; the diagonal converges rapidly for smooth
//! `f`. The driver returns the first diagonal entry that changes by less than
//! `tol` from the previous one, otherwise the deepest diagonal entry.
//!
//! Deep tableaux are counterproductive on piecewise-linear targets such as
//! empirical MAD branches, hence the modest default depth.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NumDiffError {
    #[error("function evaluation at {at} is not finite")]
    NonFiniteEvaluation { at: f64 },
    #[error("initial step {h0} is at or below the minimum step {min_h}")]
    StepUnderflow { h0: f64, min_h: f64 },
    #[error("invalid configuration: {0}")]
    BadConfig(&'static str),
}

/// Step-size schedule and stopping rule for [`richardson_derivative`].
#[derive(Debug, Clone, Copy)]
pub struct RichardsonConfig {
    /// Initial step size.
    pub h0: f64,
    /// Number of step halvings; the tableau has `max_levels + 1` rows.
    pub max_levels: usize,
    /// Early-stop threshold on successive diagonal entries.
    pub tol: f64,
    /// Floor on the step size; `None` resolves to `1e-12 * max(1, |v|)`.
    pub min_h: Option<f64>,
}

impl RichardsonConfig {
    pub fn new(h0: f64) -> Self {
        RichardsonConfig {
            h0,
            max_levels: 6,
            tol: 1e-8,
            min_h: None,
        }
    }

    fn resolved_min_h(&self, v: f64) -> f64 {
        self.min_h.unwrap_or(1e-12 * v.abs().max(1.0))
    }

    fn validate(&self, v: f64) -> Result<f64, NumDiffError> {
        if !self.h0.is_finite() || self.h0 <= 0.0 {
            return Err(NumDiffError::BadConfig("h0 must be positive and finite"));
        }
        if self.max_levels == 0 {
            return Err(NumDiffError::BadConfig("max_levels must be at least 1"));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(NumDiffError::BadConfig("tol must be positive and finite"));
        }
        let min_h = self.resolved_min_h(v);
        if !min_h.is_finite() || min_h <= 0.0 {
            return Err(NumDiffError::BadConfig("min_h must be positive and finite"));
        }
        if self.h0 <= min_h {
            return Err(NumDiffError::StepUnderflow { h0: self.h0, min_h });
        }
        Ok(min_h)
    }
}

/// Two-point central difference `(f(v+h) - f(v-h)) / (2h)`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, v: f64, h: f64) -> Result<f64, NumDiffError> {
    if !h.is_finite() || h <= 0.0 {
        return Err(NumDiffError::BadConfig("step must be positive and finite"));
    }
    let hi = f(v + h);
    if !hi.is_finite() {
        return Err(NumDiffError::NonFiniteEvaluation { at: v + h });
    }
    let lo = f(v - h);
    if !lo.is_finite() {
        return Err(NumDiffError::NonFiniteEvaluation { at: v - h });
    }
    Ok((hi - lo) / (2.0 * h))
}

/// Full extrapolation tableau as rows `T[k][0..=k]`; row `k` uses step
/// `h0 / 2^k`. Rows stop early when the next step would fall below the floor.
pub fn richardson_tableau<F: Fn(f64) -> f64>(
    f: F,
    v: f64,
    cfg: &RichardsonConfig,
) -> Result<Vec<Vec<f64>>, NumDiffError> {
    let min_h = cfg.validate(v)?;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(cfg.max_levels + 1);
    let mut h = cfg.h0;
    for k in 0..=cfg.max_levels {
        if k > 0 {
            h *= 0.5;
            if h < min_h {
                break;
            }
        }
        let mut row = Vec::with_capacity(k + 1);
        row.push(central_diff(&f, v, h)?);
        for j in 1..=k {
            let pow = 4.0f64.powi(j as i32);
            let t = (pow * row[j - 1] - rows[k - 1][j - 1]) / (pow - 1.0);
            row.push(t);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Richardson-extrapolated derivative of `f` at `v`.
///
/// Returns the first diagonal entry whose change from the previous diagonal
/// entry is below `cfg.tol`, else the deepest diagonal entry.
pub fn richardson_derivative<F: Fn(f64) -> f64>(
    f: F,
    v: f64,
    cfg: &RichardsonConfig,
) -> Result<f64, NumDiffError> {
    let rows = richardson_tableau(f, v, cfg)?;
    let mut prev = rows[0][0];
    for row in rows.iter().skip(1) {
        let diag = *row.last().expect("rows are non-empty");
        if (diag - prev).abs() < cfg.tol {
            return Ok(diag);
        }
        prev = diag;
    }
    Ok(prev)
}
