//! Mean-absolute-deviation (MAD) curves and the CDF estimators built on them.
//!
//! The MAD function of a sample, `v -> mean(|x_i - v|)`, is convex with
//! derivative `2F(v) - 1`, so its left branch `mean((v - x_i)+)` integrates
//! the empirical CDF. This crate turns that identity into tooling:
//!
//! - [`sample`]: sorted sample container with exact MAD evaluations and the
//!   left-MAD series over the order statistics.
//! - [`curve`]: MAD curve tables for plotting, with asymptote lines.
//! - [`shape`]: dimensionless spread/shape summaries (`w`, `l`, tail weights,
//!   skewness variants) for samples and for theoretical distributions.
//! - [`numdiff`]: central differences with Richardson extrapolation.
//! - [`isotonic`]: bounded weighted isotonic regression (pool-adjacent
//!   violators).
//! - [`estimate`]: CDF estimators derived from the left-MAD series, from the
//!   plain empirical CDF through difference-quotient variants to the
//!   Richardson-extrapolated estimator with isotonic adjustment.
//! - [`dist`]: reference distributions (normal, logistic, Laplace, uniform,
//!   beta, Student t(3), exponential, normal mixtures) with CDFs, quantiles,
//!   population MAD, and reproducible inverse-CDF sampling.
//! - [`bench`]: paired Monte Carlo comparison of the estimators by average
//!   squared error.

pub mod bench;
pub mod curve;
pub mod dist;
pub mod estimate;
pub mod isotonic;
pub mod numdiff;
pub mod sample;
pub mod shape;

pub use bench::{ase, run_benchmark, BenchCell, BenchConfig, BenchError, BenchReport};
pub use curve::{build_mad_curve, CurveError, MadCurve, MadCurvePoint};
pub use dist::{builtin, Builtin, Component, DistError, DistSpec, ScVariant, SeedSpec};
pub use estimate::{
    adjust_raw, default_richardson_config, estimate, estimate_backward, estimate_centre,
    estimate_empirical, estimate_fch, estimate_forward, estimate_obc, estimate_richardson_adjusted,
    estimate_richardson_raw, pointwise_ci, quantile_from_estimate, CdfEstimate, CdfPoint, CiPoint,
    EstimateError, Method, QuantileEstimate,
};
pub use isotonic::{bounded_isotonic, IsotonicError, IsotonicProblem};
pub use numdiff::{central_diff, richardson_derivative, NumDiffError, RichardsonConfig};
pub use sample::{Sample, SampleError};
pub use shape::{shape_summary, theoretical_shape, ShapeError, ShapeSummary};
