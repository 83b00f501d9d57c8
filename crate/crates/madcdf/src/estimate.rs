//! CDF estimators built on the left-MAD series.
//!
//! The left MAD branch of a sample integrates its ECDF, so differencing it
//! recovers a distribution-function estimate. Forward differences give back
//! the ECDF itself (`i/n`), backward differences give `(i-1)/n`, central
//! differences and their combinations land between the two, and Richardson
//! extrapolation of the central difference gives a higher-order estimate
//! that is then made monotone by bounded isotonic regression.
//!
//! Every estimator emits one point per distinct order statistic (ties keep
//! the upper value). The difference-quotient forms live in [`quotient`] as
//! cross-checks; the production paths use the algebraic closed forms, which
//! are equal on tie-free data and remain defined at ties.

use crate::dist::norm_quantile;
use crate::isotonic::{bounded_isotonic, IsotonicProblem};
use crate::numdiff::{richardson_derivative, NumDiffError, RichardsonConfig};
use crate::sample::Sample;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EstimateError {
    #[error("need at least {min} observations, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("sample is degenerate (zero range)")]
    DegenerateSample,
    #[error("confidence level {0} is outside the open interval (0, 1)")]
    InvalidLevel(f64),
    #[error("probability {0} is outside the open interval (0, 1)")]
    InvalidProb(f64),
    #[error("estimate is not monotone; adjust it first")]
    NotMonotone,
    #[error("need at least {min} estimate points, got {have}")]
    TooFewPoints { have: usize, min: usize },
    #[error("unknown estimator method: {0:?}")]
    UnknownMethod(String),
    #[error(transparent)]
    NumDiff(#[from] NumDiffError),
}

/// Estimator selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Empirical,
    Forward,
    Backward,
    Centre,
    Fch,
    Obc,
    RichardsonRaw,
    RichardsonAdjusted,
}

impl Method {
    pub fn all() -> [Method; 8] {
        [
            Method::Empirical,
            Method::Forward,
            Method::Backward,
            Method::Centre,
            Method::Fch,
            Method::Obc,
            Method::RichardsonRaw,
            Method::RichardsonAdjusted,
        ]
    }

    /// Minimum sample size the estimator accepts.
    pub fn min_n(self) -> usize {
        match self {
            Method::Empirical => 1,
            Method::Forward | Method::Backward => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Empirical => "empirical",
            Method::Forward => "forward",
            Method::Backward => "backward",
            Method::Centre => "centre",
            Method::Fch => "fch",
            Method::Obc => "obc",
            Method::RichardsonRaw => "richardson_raw",
            Method::RichardsonAdjusted => "richardson_adjusted",
        };
        f.write_str(s)
    }
}

impl FromStr for Method {
    type Err = EstimateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "empirical" => Ok(Method::Empirical),
            "forward" => Ok(Method::Forward),
            "backward" => Ok(Method::Backward),
            "centre" | "center" => Ok(Method::Centre),
            "fch" => Ok(Method::Fch),
            "obc" => Ok(Method::Obc),
            "richardson_raw" => Ok(Method::RichardsonRaw),
            "richardson" | "richardson_adjusted" => Ok(Method::RichardsonAdjusted),
            _ => Err(EstimateError::UnknownMethod(s.to_string())),
        }
    }
}

/// One estimated point: `p` approximates `F(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfPoint {
    pub v: f64,
    pub p: f64,
}

/// A CDF estimate over the distinct order statistics of one sample.
///
/// `monotone` reports whether the construction guarantees a nondecreasing
/// `p` in `[0, 1]`; only the raw Richardson estimate lacks that guarantee,
/// and confidence bands and quantile inversion refuse to run on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfEstimate {
    pub method: Method,
    pub points: Vec<CdfPoint>,
    pub monotone: bool,
    pub n: usize,
}

/// One pointwise confidence interval around an estimated point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CiPoint {
    pub v: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Result of inverting a CDF estimate; `clamped` flags a requested
/// probability outside the estimated range, answered with the nearest
/// endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantileEstimate {
    pub value: f64,
    pub clamped: bool,
}

/// Applies `p(i)` (1-based order-statistic index) across the sample and
/// collapses ties, keeping the upper value at each distinct abscissa.
fn closed_form(s: &Sample, method: Method, p: impl Fn(usize) -> f64) -> CdfEstimate {
    let xs = s.values();
    let n = xs.len();
    let mut points = Vec::with_capacity(n);
    for i in 1..=n {
        if i == n || xs[i] > xs[i - 1] {
            points.push(CdfPoint {
                v: xs[i - 1],
                p: p(i),
            });
        }
    }
    CdfEstimate {
        method,
        points,
        monotone: true,
        n,
    }
}

/// Spacing ratio `(x_(i) - x_(i-1)) / (x_(i+1) - x_(i-1))` for interior
/// 1-based `i`, defined as 1/2 when the outer values coincide.
fn spacing_ratio(xs: &[f64], i: usize) -> f64 {
    let lo = xs[i - 2];
    let hi = xs[i];
    if hi == lo {
        0.5
    } else {
        (xs[i - 1] - lo) / (hi - lo)
    }
}

fn require_n(s: &Sample, min: usize) -> Result<(), EstimateError> {
    if s.n() < min {
        Err(EstimateError::TooSmall { n: s.n(), min })
    } else {
        Ok(())
    }
}

/// ECDF: `p = i/n` at each order statistic.
pub fn estimate_empirical(s: &Sample) -> CdfEstimate {
    let n = s.n() as f64;
    closed_form(s, Method::Empirical, |i| i as f64 / n)
}

/// Forward differencing of the left-MAD series; algebraically the ECDF
/// (`i/n`, with the one-sided value 1 at the top).
pub fn estimate_forward(s: &Sample) -> Result<CdfEstimate, EstimateError> {
    require_n(s, 2)?;
    let n = s.n() as f64;
    Ok(closed_form(s, Method::Forward, |i| i as f64 / n))
}

/// Backward differencing: `(i-1)/n`, with the one-sided value 0 at the
/// bottom.
pub fn estimate_backward(s: &Sample) -> Result<CdfEstimate, EstimateError> {
    require_n(s, 2)?;
    let n = s.n() as f64;
    Ok(closed_form(s, Method::Backward, |i| (i as f64 - 1.0) / n))
}

/// Central differencing: `i/n - r_i/n` with the spacing ratio `r_i`, ends
/// `1/n` and `(n-1)/n`.
pub fn estimate_centre(s: &Sample) -> Result<CdfEstimate, EstimateError> {
    require_n(s, 3)?;
    let xs = s.values();
    let n = s.n();
    let nf = n as f64;
    Ok(closed_form(s, Method::Centre, |i| {
        if i == 1 {
            1.0 / nf
        } else if i == n {
            (nf - 1.0) / nf
        } else {
            i as f64 / nf - spacing_ratio(xs, i) / nf
        }
    }))
}

/// Cubic-Hermite-slope differencing; the interior closed form is the Hazen
/// plotting position `(2i-1)/(2n)`.
pub fn estimate_fch(s: &Sample) -> Result<CdfEstimate, EstimateError> {
    require_n(s, 3)?;
    let n = s.n();
    let nf = n as f64;
    Ok(closed_form(s, Method::Fch, |i| {
        if i == 1 {
            1.0 / nf
        } else if i == n {
            (nf - 1.0) / nf
        } else {
            (2.0 * i as f64 - 1.0) / (2.0 * nf)
        }
    }))
}

/// Mean of the forward, backward, and central schemes:
/// `(3i-1)/(3n) - r_i/(3n)` interior, ends `1/n` and `(n-1)/n`.
pub fn estimate_obc(s: &Sample) -> Result<CdfEstimate, EstimateError> {
    require_n(s, 3)?;
    let xs = s.values();
    let n = s.n();
    let nf = n as f64;
    Ok(closed_form(s, Method::Obc, |i| {
        if i == 1 {
            1.0 / nf
        } else if i == n {
            (nf - 1.0) / nf
        } else {
            (3.0 * i as f64 - 1.0) / (3.0 * nf) - spacing_ratio(xs, i) / (3.0 * nf)
        }
    }))
}

/// Default Richardson step for a sample: `range / sqrt(n)`. Wide enough to
/// smooth the `1/n` staircase of the left-MAD slope, shrinking with `n` so
/// the estimate localizes.
pub fn default_richardson_config(s: &Sample) -> RichardsonConfig {
    RichardsonConfig::new(s.range() / (s.n() as f64).sqrt())
}

/// Richardson-extrapolated derivative of the left-MAD branch at each
/// distinct order statistic. Values may fall slightly outside `[0, 1]` and
/// need not be monotone; see [`estimate_richardson_adjusted`].
pub fn estimate_richardson_raw(
    s: &Sample,
    cfg: Option<RichardsonConfig>,
) -> Result<CdfEstimate, EstimateError> {
    require_n(s, 3)?;
    if s.range() == 0.0 {
        return Err(EstimateError::DegenerateSample);
    }
    let cfg = cfg.unwrap_or_else(|| default_richardson_config(s));
    let xs = s.values();
    let n = xs.len();
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        if i + 1 == n || xs[i + 1] > xs[i] {
            let p = richardson_derivative(|v| s.delta_minus(v), xs[i], &cfg)?;
            points.push(CdfPoint { v: xs[i], p });
        }
    }
    Ok(CdfEstimate {
        method: Method::RichardsonRaw,
        points,
        monotone: false,
        n,
    })
}

/// Projects a raw Richardson estimate onto nondecreasing values in `[0, 1]`
/// (bounded isotonic regression with equal weights `1/n`).
pub fn adjust_raw(raw: &CdfEstimate) -> CdfEstimate {
    let y: Vec<f64> = raw.points.iter().map(|pt| pt.p).collect();
    let w = vec![1.0 / raw.n as f64; y.len()];
    let problem =
        IsotonicProblem::new(y, w, 0.0, 1.0).expect("estimate points form a valid problem");
    let fitted = bounded_isotonic(&problem);
    CdfEstimate {
        method: Method::RichardsonAdjusted,
        points: raw
            .points
            .iter()
            .zip(fitted)
            .map(|(pt, p)| CdfPoint { v: pt.v, p })
            .collect(),
        monotone: true,
        n: raw.n,
    }
}

/// [`estimate_richardson_raw`] followed by [`adjust_raw`]: monotone, bounded
/// in `[0, 1]`.
pub fn estimate_richardson_adjusted(
    s: &Sample,
    cfg: Option<RichardsonConfig>,
) -> Result<CdfEstimate, EstimateError> {
    Ok(adjust_raw(&estimate_richardson_raw(s, cfg)?))
}

/// Runs the estimator selected by `method` with its default configuration.
pub fn estimate(s: &Sample, method: Method) -> Result<CdfEstimate, EstimateError> {
    match method {
        Method::Empirical => Ok(estimate_empirical(s)),
        Method::Forward => estimate_forward(s),
        Method::Backward => estimate_backward(s),
        Method::Centre => estimate_centre(s),
        Method::Fch => estimate_fch(s),
        Method::Obc => estimate_obc(s),
        Method::RichardsonRaw => estimate_richardson_raw(s, None),
        Method::RichardsonAdjusted => estimate_richardson_adjusted(s, None),
    }
}

/// Normal-approximation pointwise band: `p -/+ z sqrt(p(1-p)/n)`, clipped to
/// `[0, 1]`. Requires a monotone estimate.
pub fn pointwise_ci(e: &CdfEstimate, level: f64) -> Result<Vec<CiPoint>, EstimateError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(EstimateError::InvalidLevel(level));
    }
    if !e.monotone {
        return Err(EstimateError::NotMonotone);
    }
    let z = norm_quantile(0.5 * (1.0 + level));
    let n = e.n as f64;
    Ok(e.points
        .iter()
        .map(|pt| {
            let half = z * (pt.p * (1.0 - pt.p) / n).sqrt();
            CiPoint {
                v: pt.v,
                lo: (pt.p - half).max(0.0),
                hi: (pt.p + half).min(1.0),
            }
        })
        .collect())
}

/// Inverts a monotone estimate at `prob` by linear interpolation of `v`
/// against `p`. Probabilities outside the estimated range return the nearest
/// endpoint with `clamped` set; at a flat segment the left edge is returned.
pub fn quantile_from_estimate(
    e: &CdfEstimate,
    prob: f64,
) -> Result<QuantileEstimate, EstimateError> {
    if !(prob > 0.0 && prob < 1.0) {
        return Err(EstimateError::InvalidProb(prob));
    }
    if !e.monotone {
        return Err(EstimateError::NotMonotone);
    }
    if e.points.len() < 2 {
        return Err(EstimateError::TooFewPoints {
            have: e.points.len(),
            min: 2,
        });
    }
    let pts = &e.points;
    if prob < pts[0].p {
        return Ok(QuantileEstimate {
            value: pts[0].v,
            clamped: true,
        });
    }
    let last = pts[pts.len() - 1];
    if prob > last.p {
        return Ok(QuantileEstimate {
            value: last.v,
            clamped: true,
        });
    }
    let j = pts.partition_point(|pt| pt.p < prob);
    let value = if j == 0 || pts[j].p == prob {
        pts[j].v
    } else {
        let (a, b) = (pts[j - 1], pts[j]);
        a.v + (prob - a.p) / (b.p - a.p) * (b.v - a.v)
    };
    Ok(QuantileEstimate {
        value,
        clamped: false,
    })
}

/// Difference-quotient forms of the closed-form estimators, one value per
/// order statistic (no tie collapsing). These exist as cross-checks: on
/// tie-free data they equal the closed forms to floating-point accuracy; at
/// tied abscissae the quotients are 0/0 and the closed forms take over.
pub mod quotient {
    use crate::sample::Sample;

    /// Compensated product: `hi + lo == a * b` exactly.
    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let hi = a * b;
        let lo = a.mul_add(b, -hi);
        (hi, lo)
    }

    /// Increment of the left-MAD series over the gap `(x_j, x_{j+1})`
    /// (0-based `j`), namely `((j+1)/n) * (x_{j+1} - x_j)`, as a compensated
    /// pair. The series is piecewise linear with the ECDF as slope, so its
    /// difference over a gap is this product exactly; forming it directly
    /// avoids the cancellation that differencing stored partial sums incurs
    /// when a gap is narrow.
    fn gap_increment(xs: &[f64], j: usize) -> (f64, f64) {
        let slope = (j + 1) as f64 / xs.len() as f64;
        two_prod(slope, xs[j + 1] - xs[j])
    }

    fn one_gap_quotient(xs: &[f64], j: usize) -> f64 {
        let (hi, lo) = gap_increment(xs, j);
        let dx = xs[j + 1] - xs[j];
        hi / dx + lo / dx
    }

    fn two_gap_quotient(xs: &[f64], j: usize) -> f64 {
        let (ahi, alo) = gap_increment(xs, j - 1);
        let (bhi, blo) = gap_increment(xs, j);
        let dx = xs[j + 1] - xs[j - 1];
        ahi / dx + bhi / dx + (alo + blo) / dx
    }

    /// Forward quotients of the left-MAD series; one-sided value 1 at the
    /// top. Needs n >= 2.
    pub fn forward(s: &Sample) -> Vec<f64> {
        let xs = s.values();
        let n = xs.len();
        (0..n)
            .map(|j| {
                if j + 1 == n {
                    1.0
                } else {
                    one_gap_quotient(xs, j)
                }
            })
            .collect()
    }

    /// Backward quotients; one-sided value 0 at the bottom. Needs n >= 2.
    pub fn backward(s: &Sample) -> Vec<f64> {
        let xs = s.values();
        (0..xs.len())
            .map(|j| {
                if j == 0 {
                    0.0
                } else {
                    one_gap_quotient(xs, j - 1)
                }
            })
            .collect()
    }

    /// Central quotients, falling back to the one-sided forward/backward
    /// quotients at the ends. Needs n >= 3.
    pub fn centre(s: &Sample) -> Vec<f64> {
        let xs = s.values();
        let n = xs.len();
        (0..n)
            .map(|j| {
                if j == 0 {
                    one_gap_quotient(xs, 0)
                } else if j + 1 == n {
                    one_gap_quotient(xs, j - 1)
                } else {
                    two_gap_quotient(xs, j)
                }
            })
            .collect()
    }

    /// Hermite-slope quotients: the mean of forward and backward in the
    /// interior, one-sided at the ends. Needs n >= 3.
    pub fn fch(s: &Sample) -> Vec<f64> {
        let f = forward(s);
        let b = backward(s);
        let n = f.len();
        (0..n)
            .map(|j| {
                if j == 0 {
                    f[0]
                } else if j + 1 == n {
                    b[n - 1]
                } else {
                    0.5 * (f[j] + b[j])
                }
            })
            .collect()
    }

    /// Mean of the forward, backward, and central quotients in the interior,
    /// one-sided at the ends. Needs n >= 3.
    pub fn obc(s: &Sample) -> Vec<f64> {
        let f = forward(s);
        let b = backward(s);
        let c = centre(s);
        let n = f.len();
        (0..n)
            .map(|j| {
                if j == 0 || j + 1 == n {
                    c[j]
                } else {
                    (f[j] + b[j] + c[j]) / 3.0
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{DistSpec, SeedSpec};
    use proptest::prelude::*;

    fn sample(values: &[f64]) -> Sample {
        Sample::new(values).unwrap()
    }

    fn ps(e: &CdfEstimate) -> Vec<f64> {
        e.points.iter().map(|pt| pt.p).collect()
    }

    fn vs(e: &CdfEstimate) -> Vec<f64> {
        e.points.iter().map(|pt| pt.v).collect()
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    fn normal_sample(n: usize, stream: u64) -> Sample {
        DistSpec::normal(0.0, 1.0).unwrap().sample(
            n,
            SeedSpec {
                master_seed: 1234,
                stream_id: stream,
            },
        )
    }

    #[test]
    fn empirical_closed_form() {
        let e = estimate_empirical(&sample(&[1.0, 2.0, 3.0]));
        assert_close(&ps(&e), &[1.0 / 3.0, 2.0 / 3.0, 1.0], 1e-15);
        let single = estimate_empirical(&sample(&[5.0]));
        assert_eq!(ps(&single), vec![1.0]);
        assert!(single.monotone);
    }

    #[test]
    fn ties_collapse_to_upper_step() {
        let e = estimate_empirical(&sample(&[1.0, 1.0, 2.0]));
        assert_eq!(vs(&e), vec![1.0, 2.0]);
        assert_close(&ps(&e), &[2.0 / 3.0, 1.0], 1e-15);
        assert_eq!(e.n, 3);
    }

    #[test]
    fn forward_is_the_ecdf() {
        let e = estimate_forward(&sample(&[1.0, 2.0, 4.0])).unwrap();
        assert_close(&ps(&e), &[1.0 / 3.0, 2.0 / 3.0, 1.0], 1e-15);
        let two = estimate_forward(&sample(&[0.0, 10.0])).unwrap();
        assert_close(&ps(&two), &[0.5, 1.0], 1e-15);
    }

    #[test]
    fn backward_closed_form() {
        let e = estimate_backward(&sample(&[1.0, 2.0, 4.0])).unwrap();
        assert_close(&ps(&e), &[0.0, 1.0 / 3.0, 2.0 / 3.0], 1e-15);
        let two = estimate_backward(&sample(&[0.0, 10.0])).unwrap();
        assert_close(&ps(&two), &[0.0, 0.5], 1e-15);
    }

    #[test]
    fn centre_closed_form() {
        let e = estimate_centre(&sample(&[1.0, 2.0, 4.0])).unwrap();
        assert_close(&ps(&e), &[1.0 / 3.0, 5.0 / 9.0, 2.0 / 3.0], 1e-15);
        let even = estimate_centre(&sample(&[1.0, 2.0, 3.0])).unwrap();
        assert_close(&ps(&even), &[1.0 / 3.0, 0.5, 2.0 / 3.0], 1e-15);
    }

    #[test]
    fn fch_closed_form() {
        let e = estimate_fch(&sample(&[7.0, -1.0, 3.0])).unwrap();
        assert_close(&ps(&e), &[1.0 / 3.0, 0.5, 2.0 / 3.0], 1e-15);
        let five = estimate_fch(&sample(&[1.0, 2.0, 3.0, 4.0, 5.0])).unwrap();
        assert!((ps(&five)[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn obc_closed_form() {
        let e = estimate_obc(&sample(&[1.0, 2.0, 4.0])).unwrap();
        assert!((ps(&e)[1] - 14.0 / 27.0).abs() < 1e-15);
        // Equal spacing: ratio 1/2, interior (3i-1)/(3n) - 1/(6n).
        let even = estimate_obc(&sample(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        let want = (3.0 * 2.0 - 1.0) / 12.0 - 1.0 / 24.0;
        assert!((ps(&even)[1] - want).abs() < 1e-15);
    }

    #[test]
    fn small_samples_are_rejected() {
        assert_eq!(
            estimate_forward(&sample(&[5.0])).unwrap_err(),
            EstimateError::TooSmall { n: 1, min: 2 }
        );
        assert_eq!(
            estimate_centre(&sample(&[1.0, 2.0])).unwrap_err(),
            EstimateError::TooSmall { n: 2, min: 3 }
        );
        assert_eq!(
            estimate_richardson_raw(&sample(&[1.0, 2.0]), None).unwrap_err(),
            EstimateError::TooSmall { n: 2, min: 3 }
        );
        assert_eq!(
            estimate_richardson_raw(&sample(&[2.0, 2.0, 2.0]), None).unwrap_err(),
            EstimateError::DegenerateSample
        );
    }

    #[test]
    fn quotients_match_closed_forms_on_tie_free_samples() {
        for k in 0..100u64 {
            let n = 3 + (k as usize % 48);
            let s = normal_sample(n, k);
            let cases: [(Vec<f64>, CdfEstimate); 5] = [
                (quotient::forward(&s), estimate_forward(&s).unwrap()),
                (quotient::backward(&s), estimate_backward(&s).unwrap()),
                (quotient::centre(&s), estimate_centre(&s).unwrap()),
                (quotient::fch(&s), estimate_fch(&s).unwrap()),
                (quotient::obc(&s), estimate_obc(&s).unwrap()),
            ];
            for (q, e) in &cases {
                assert_close(q, &ps(e), 1e-12);
            }
        }
    }

    #[test]
    fn interior_sup_distance_bounds() {
        for k in 0..25u64 {
            let n = 5 + (k as usize % 30);
            let nf = n as f64;
            let s = normal_sample(n, 1000 + k);
            let centre = ps(&estimate_centre(&s).unwrap());
            let fch = ps(&estimate_fch(&s).unwrap());
            let obc = ps(&estimate_obc(&s).unwrap());
            for i in 2..n {
                let target = i as f64 / nf;
                assert!((centre[i - 1] - target).abs() < 1.0 / nf);
                assert!(((fch[i - 1] - target).abs() - 1.0 / (2.0 * nf)).abs() < 1e-15);
                assert!((obc[i - 1] - target).abs() < 1.0 / nf);
            }
        }
    }

    #[test]
    fn richardson_raw_tracks_the_true_cdf() {
        let d = DistSpec::normal(0.0, 1.0).unwrap();
        let s = d.sample(
            200,
            SeedSpec {
                master_seed: 77,
                stream_id: 0,
            },
        );
        let e = estimate_richardson_raw(&s, None).unwrap();
        let worst = e
            .points
            .iter()
            .map(|pt| (pt.p - d.cdf(pt.v)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 0.15, "worst gap {worst}");
        assert!(!e.monotone);
    }

    #[test]
    fn richardson_raw_small_sample_sanity() {
        let e = estimate_richardson_raw(&sample(&[0.3, 1.1, 2.9]), None).unwrap();
        for pt in &e.points {
            assert!(pt.p.is_finite());
            assert!((-0.2..=1.2).contains(&pt.p), "p = {}", pt.p);
        }
    }

    #[test]
    fn richardson_raw_symmetric_center_is_half() {
        let e = estimate_richardson_raw(&sample(&[-2.0, -1.0, 0.0, 1.0, 2.0]), None).unwrap();
        let mid = e.points.iter().find(|pt| pt.v == 0.0).unwrap();
        assert!((mid.p - 0.5).abs() < 1e-6);
    }

    #[test]
    fn richardson_propagates_step_underflow() {
        let s = sample(&[1.0, 2.0, 3.0]);
        let cfg = RichardsonConfig {
            min_h: Some(1.0),
            ..RichardsonConfig::new(0.5)
        };
        assert!(matches!(
            estimate_richardson_raw(&s, Some(cfg)).unwrap_err(),
            EstimateError::NumDiff(NumDiffError::StepUnderflow { .. })
        ));
    }

    #[test]
    fn adjustment_pools_and_clamps() {
        let raw = CdfEstimate {
            method: Method::RichardsonRaw,
            points: vec![
                CdfPoint { v: 1.0, p: 0.2 },
                CdfPoint { v: 2.0, p: 0.1 },
                CdfPoint { v: 3.0, p: 0.9 },
            ],
            monotone: false,
            n: 3,
        };
        let adj = adjust_raw(&raw);
        assert_close(&ps(&adj), &[0.15, 0.15, 0.9], 1e-12);
        assert!(adj.monotone);
        assert_eq!(adj.method, Method::RichardsonAdjusted);

        let low = CdfEstimate {
            points: vec![
                CdfPoint { v: 1.0, p: -0.02 },
                CdfPoint { v: 2.0, p: 0.4 },
                CdfPoint { v: 3.0, p: 0.8 },
            ],
            ..raw.clone()
        };
        let adj = adjust_raw(&low);
        assert_close(&ps(&adj), &[0.0, 0.4, 0.8], 1e-12);

        let fine = CdfEstimate {
            points: vec![
                CdfPoint { v: 1.0, p: 0.1 },
                CdfPoint { v: 2.0, p: 0.5 },
                CdfPoint { v: 3.0, p: 0.9 },
            ],
            ..raw.clone()
        };
        assert_close(&ps(&adjust_raw(&fine)), &[0.1, 0.5, 0.9], 1e-15);
    }

    #[test]
    fn adjusted_estimates_are_monotone_in_bounds() {
        for k in 0..40u64 {
            let n = 3 + (k as usize % 60);
            let s = normal_sample(n, 2000 + k);
            let e = estimate_richardson_adjusted(&s, None).unwrap();
            assert!(e.monotone);
            let p = ps(&e);
            for w in p.windows(2) {
                assert!(w[1] >= w[0] - 1e-15);
            }
            for &x in &p {
                assert!((0.0..=1.0).contains(&x));
            }
        }
    }

    #[test]
    fn adjusted_stays_near_the_ecdf() {
        // Monitored property, not a contract: the adjusted estimate should
        // track i/n to about 1/n. A loose 3/n envelope guards regressions;
        // the tight bound is reported when it breaks.
        let mut worst_ratio = 0.0f64;
        for k in 0..20u64 {
            let s = normal_sample(50, 3000 + k);
            let e = estimate_richardson_adjusted(&s, None).unwrap();
            let n = s.n() as f64;
            for (idx, pt) in e.points.iter().enumerate() {
                let gap = (pt.p - (idx as f64 + 1.0) / n).abs();
                worst_ratio = worst_ratio.max(gap * n);
            }
        }
        if worst_ratio > 1.0 {
            println!("adjusted-vs-ecdf sup distance reached {worst_ratio:.3}/n");
        }
        assert!(worst_ratio <= 3.0, "sup distance {worst_ratio}/n");
    }

    #[test]
    fn ci_frozen_example() {
        let e = CdfEstimate {
            method: Method::Empirical,
            points: vec![CdfPoint { v: 0.0, p: 0.5 }],
            monotone: true,
            n: 100,
        };
        let ci = pointwise_ci(&e, 0.99).unwrap();
        assert!((ci[0].lo - 0.3712).abs() < 5e-4);
        assert!((ci[0].hi - 0.6288).abs() < 5e-4);
    }

    #[test]
    fn ci_degenerate_endpoints() {
        let e = CdfEstimate {
            method: Method::Backward,
            points: vec![CdfPoint { v: 0.0, p: 0.0 }, CdfPoint { v: 1.0, p: 1.0 }],
            monotone: true,
            n: 2,
        };
        let ci = pointwise_ci(&e, 0.95).unwrap();
        assert_eq!((ci[0].lo, ci[0].hi), (0.0, 0.0));
        assert_eq!((ci[1].lo, ci[1].hi), (1.0, 1.0));
    }

    #[test]
    fn ci_rejects_bad_input() {
        let e = estimate_empirical(&sample(&[1.0, 2.0]));
        assert_eq!(
            pointwise_ci(&e, 1.0).unwrap_err(),
            EstimateError::InvalidLevel(1.0)
        );
        let raw = estimate_richardson_raw(&sample(&[1.0, 2.0, 3.0]), None).unwrap();
        assert_eq!(
            pointwise_ci(&raw, 0.99).unwrap_err(),
            EstimateError::NotMonotone
        );
    }

    #[test]
    fn ci_brackets_the_estimate() {
        let s = normal_sample(25, 9);
        let e = estimate_fch(&s).unwrap();
        let ci = pointwise_ci(&e, 0.99).unwrap();
        for (pt, band) in e.points.iter().zip(&ci) {
            assert!(band.lo <= pt.p && pt.p <= band.hi);
            assert!(band.lo >= 0.0 && band.hi <= 1.0);
        }
    }

    #[test]
    fn quantile_interpolation() {
        let e = CdfEstimate {
            method: Method::RichardsonAdjusted,
            points: vec![
                CdfPoint { v: 1.0, p: 0.0 },
                CdfPoint { v: 2.0, p: 0.5 },
                CdfPoint { v: 3.0, p: 1.0 },
            ],
            monotone: true,
            n: 3,
        };
        let q = quantile_from_estimate(&e, 0.25).unwrap();
        assert!((q.value - 1.5).abs() < 1e-15);
        assert!(!q.clamped);
        let node = quantile_from_estimate(&e, 0.5).unwrap();
        assert!((node.value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn quantile_clamps_and_flags() {
        let e = CdfEstimate {
            method: Method::Fch,
            points: vec![CdfPoint { v: 1.0, p: 0.25 }, CdfPoint { v: 4.0, p: 0.75 }],
            monotone: true,
            n: 2,
        };
        let lo = quantile_from_estimate(&e, 0.1).unwrap();
        assert_eq!((lo.value, lo.clamped), (1.0, true));
        let hi = quantile_from_estimate(&e, 0.9).unwrap();
        assert_eq!((hi.value, hi.clamped), (4.0, true));
    }

    #[test]
    fn quantile_prefers_left_edge_of_flat_segments() {
        let e = CdfEstimate {
            method: Method::RichardsonAdjusted,
            points: vec![
                CdfPoint { v: 1.0, p: 0.2 },
                CdfPoint { v: 2.0, p: 0.5 },
                CdfPoint { v: 3.0, p: 0.5 },
                CdfPoint { v: 4.0, p: 0.9 },
            ],
            monotone: true,
            n: 4,
        };
        let q = quantile_from_estimate(&e, 0.5).unwrap();
        assert_eq!(q.value, 2.0);
    }

    #[test]
    fn quantile_rejects_bad_input() {
        let raw = estimate_richardson_raw(&sample(&[1.0, 2.0, 3.0]), None).unwrap();
        assert_eq!(
            quantile_from_estimate(&raw, 0.5).unwrap_err(),
            EstimateError::NotMonotone
        );
        let single = estimate_empirical(&sample(&[1.0]));
        assert_eq!(
            quantile_from_estimate(&single, 0.5).unwrap_err(),
            EstimateError::TooFewPoints { have: 1, min: 2 }
        );
        let e = estimate_empirical(&sample(&[1.0, 2.0]));
        assert_eq!(
            quantile_from_estimate(&e, 0.0).unwrap_err(),
            EstimateError::InvalidProb(0.0)
        );
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::all() {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert_eq!(
            "richardson".parse::<Method>().unwrap(),
            Method::RichardsonAdjusted
        );
        assert_eq!(
            "richardson-raw".parse::<Method>().unwrap(),
            Method::RichardsonRaw
        );
        assert_eq!("center".parse::<Method>().unwrap(), Method::Centre);
        assert!(matches!(
            "splines".parse::<Method>().unwrap_err(),
            EstimateError::UnknownMethod(_)
        ));
    }

    #[test]
    fn richardson_equivariance_on_fixed_cases() {
        let s = normal_sample(20, 400);
        let base = estimate_richardson_adjusted(&s, None).unwrap();
        for &(a, b) in &[(2.0, 3.0), (1.7, -0.4)] {
            let mapped: Vec<f64> = s.values().iter().map(|&x| a * x + b).collect();
            let moved = estimate_richardson_adjusted(&Sample::new(&mapped).unwrap(), None).unwrap();
            for (p0, p1) in base.points.iter().zip(&moved.points) {
                assert!((p0.p - p1.p).abs() < 1e-9, "a={a} b={b}");
                assert!((a * p0.v + b - p1.v).abs() < 1e-9 * (1.0 + p1.v.abs()));
            }
        }
    }

    fn lattice_values() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-100i32..100, 3..30)
            .prop_map(|v| v.into_iter().map(f64::from).collect::<Vec<f64>>())
            .prop_filter("needs spread", |v: &Vec<f64>| {
                let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
                let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                max > min
            })
    }

    proptest! {
        #[test]
        fn closed_forms_are_affine_equivariant(
            values in lattice_values(),
            a in 0.5..4.0f64,
            b in -5.0..5.0f64,
        ) {
            let s = sample(&values);
            let mapped: Vec<f64> = values.iter().map(|&x| a * x + b).collect();
            let t = sample(&mapped);
            let pairs = [
                (estimate_empirical(&s), estimate_empirical(&t)),
                (estimate_forward(&s).unwrap(), estimate_forward(&t).unwrap()),
                (estimate_backward(&s).unwrap(), estimate_backward(&t).unwrap()),
                (estimate_centre(&s).unwrap(), estimate_centre(&t).unwrap()),
                (estimate_fch(&s).unwrap(), estimate_fch(&t).unwrap()),
                (estimate_obc(&s).unwrap(), estimate_obc(&t).unwrap()),
            ];
            for (e0, e1) in &pairs {
                prop_assert_eq!(e0.points.len(), e1.points.len());
                for (p0, p1) in e0.points.iter().zip(&e1.points) {
                    prop_assert!((p0.p - p1.p).abs() < 1e-10);
                    prop_assert!((a * p0.v + b - p1.v).abs() < 1e-10 * (1.0 + p1.v.abs()));
                }
            }
        }

        #[test]
        fn closed_forms_are_monotone_in_bounds(values in lattice_values()) {
            let s = sample(&values);
            for e in [
                estimate_empirical(&s),
                estimate_forward(&s).unwrap(),
                estimate_backward(&s).unwrap(),
                estimate_centre(&s).unwrap(),
                estimate_fch(&s).unwrap(),
                estimate_obc(&s).unwrap(),
            ] {
                let p = ps(&e);
                for w in p.windows(2) {
                    prop_assert!(w[1] >= w[0] - 1e-15);
                }
                for &x in &p {
                    prop_assert!((-1e-15..=1.0 + 1e-15).contains(&x));
                }
                let v = vs(&e);
                for w in v.windows(2) {
                    prop_assert!(w[1] > w[0]);
                }
            }
        }
    }
}
