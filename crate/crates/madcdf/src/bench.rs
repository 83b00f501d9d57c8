//! Paired Monte Carlo benchmark of the CDF estimators.
//!
//! For each (distribution, size) pair the harness draws `reps` samples
//! (replication `r` uses stream id `r`, so the draw is a pure function of
//! the master seed), evaluates every requested estimator on the *same*
//! sample, and records the mean averaged squared error per cell together
//! with its Monte Carlo standard error.
//!
//! Replications run in parallel, but results are collected and reduced in
//! replication order, so a report depends only on the config — never on the
//! thread schedule.

use crate::dist::{builtin, Builtin, DistSpec, ScVariant, SeedSpec};
use crate::estimate::{estimate, CdfEstimate, EstimateError, Method};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error("invalid benchmark config: {0}")]
    InvalidConfig(String),
    #[error("estimator failed at dist {dist}, n = {n}, rep = {rep}: {source}")]
    EstimatorFailed {
        dist: Builtin,
        n: usize,
        rep: usize,
        source: EstimateError,
    },
}

/// Benchmark request: the full cross of `distributions x sizes x estimators`
/// at `reps` replications each.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchConfig {
    pub distributions: Vec<Builtin>,
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub estimators: Vec<Method>,
    pub master_seed: u64,
    pub sc_variant: ScVariant,
}

/// One benchmark cell: the mean ASE of `estimator` on samples of size `n`
/// from `dist`, with its Monte Carlo standard error (0 when `reps` is 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchCell {
    pub dist: Builtin,
    pub n: usize,
    pub estimator: Method,
    pub mean_ase: f64,
    pub mc_std_error: f64,
    pub reps: usize,
}

/// Completed benchmark: cells in config order (distribution-major, then
/// size, then estimator), plus the config echo and crate version.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub cells: Vec<BenchCell>,
    pub config: BenchConfig,
    pub version: String,
}

/// Averaged squared error of an estimate against the true CDF, evaluated at
/// the estimate's own abscissae: `mean((p_i - F(v_i))^2)`.
pub fn ase(e: &CdfEstimate, d: &DistSpec) -> f64 {
    assert!(!e.points.is_empty(), "estimate has no points");
    let sum: f64 = e
        .points
        .iter()
        .map(|pt| {
            let err = pt.p - d.cdf(pt.v);
            err * err
        })
        .sum();
    sum / e.points.len() as f64
}

fn validate(cfg: &BenchConfig) -> Result<(), BenchError> {
    if cfg.distributions.is_empty() {
        return Err(BenchError::InvalidConfig(
            "no distributions requested".into(),
        ));
    }
    if cfg.sizes.is_empty() {
        return Err(BenchError::InvalidConfig(
            "no sample sizes requested".into(),
        ));
    }
    if cfg.estimators.is_empty() {
        return Err(BenchError::InvalidConfig("no estimators requested".into()));
    }
    if cfg.reps < 1 {
        return Err(BenchError::InvalidConfig("reps must be at least 1".into()));
    }
    for &n in &cfg.sizes {
        for &m in &cfg.estimators {
            if n < m.min_n() {
                return Err(BenchError::InvalidConfig(format!(
                    "size {n} is too small for estimator {m} (needs {})",
                    m.min_n()
                )));
            }
        }
    }
    Ok(())
}

/// Runs the full benchmark. Deterministic for a fixed config: replication
/// `r` of every (distribution, size) pair samples stream `r` of the master
/// seed, and per-cell reductions run in replication order.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    validate(cfg)?;
    let mut cells =
        Vec::with_capacity(cfg.distributions.len() * cfg.sizes.len() * cfg.estimators.len());
    for &name in &cfg.distributions {
        let d = builtin(name, cfg.sc_variant);
        for &n in &cfg.sizes {
            // per_rep[r][k] = ASE of estimator k on replication r's sample.
            let per_rep: Vec<Vec<f64>> = (0..cfg.reps)
                .into_par_iter()
                .map(|rep| {
                    let s = d.sample(
                        n,
                        SeedSpec {
                            master_seed: cfg.master_seed,
                            stream_id: rep as u64,
                        },
                    );
                    cfg.estimators
                        .iter()
                        .map(|&m| {
                            let e =
                                estimate(&s, m).map_err(|source| BenchError::EstimatorFailed {
                                    dist: name,
                                    n,
                                    rep,
                                    source,
                                })?;
                            Ok(ase(&e, &d))
                        })
                        .collect::<Result<Vec<f64>, BenchError>>()
                })
                .collect::<Result<Vec<Vec<f64>>, BenchError>>()?;

            for (k, &m) in cfg.estimators.iter().enumerate() {
                let reps = cfg.reps as f64;
                let mean = per_rep.iter().map(|r| r[k]).sum::<f64>() / reps;
                let mc_std_error = if cfg.reps > 1 {
                    let var = per_rep
                        .iter()
                        .map(|r| {
                            let d = r[k] - mean;
                            d * d
                        })
                        .sum::<f64>()
                        / (reps - 1.0);
                    (var / reps).sqrt()
                } else {
                    0.0
                };
                cells.push(BenchCell {
                    dist: name,
                    n,
                    estimator: m,
                    mean_ase: mean,
                    mc_std_error,
                    reps: cfg.reps,
                });
            }
        }
    }
    Ok(BenchReport {
        cells,
        config: cfg.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}
