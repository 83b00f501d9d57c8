//! MAD curve tables for plotting.
//!
//! For each grid value `v` the curve records the MAD `delta(v)`, the two
//! branches, and the asymptote lines `mean - v` and `v - mean` that the curve
//! approaches in the tails. The minimum of the curve is the MAD about the
//! median.

use crate::sample::Sample;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CurveError {
    #[error("grid must be strictly increasing and finite")]
    InvalidGrid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MadCurvePoint {
    pub v: f64,
    pub delta: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    /// Left asymptote `mean - v`.
    pub line_left: f64,
    /// Right asymptote `v - mean`.
    pub line_right: f64,
}

#[derive(Debug, Clone)]
pub struct MadCurve {
    /// Points ordered by `v` ascending.
    pub points: Vec<MadCurvePoint>,
    pub mean: f64,
    pub median: f64,
    /// `delta(median)`, the curve minimum.
    pub min_delta: f64,
}

/// Tabulates the MAD function of `s` over `grid`, or over the sample's own
/// order statistics when `grid` is `None`.
///
/// A user grid must be strictly increasing and finite.
pub fn build_mad_curve(s: &Sample, grid: Option<&[f64]>) -> Result<MadCurve, CurveError> {
    let default_grid;
    let grid = match grid {
        Some(g) => {
            if g.is_empty() || g.iter().any(|v| !v.is_finite()) {
                return Err(CurveError::InvalidGrid);
            }
            if g.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CurveError::InvalidGrid);
            }
            g
        }
        None => {
            default_grid = s.values().to_vec();
            &default_grid
        }
    };

    let mean = s.mean();
    let points = grid
        .iter()
        .map(|&v| {
            let delta_plus = s.delta_plus(v);
            let delta_minus = s.delta_minus(v);
            MadCurvePoint {
                v,
                delta: s.delta(v),
                delta_plus,
                delta_minus,
                line_left: mean - v,
                line_right: v - mean,
            }
        })
        .collect();

    Ok(MadCurve {
        points,
        mean,
        median: s.median(),
        min_delta: s.mad_about_median(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{DistSpec, SeedSpec};

    #[test]
    fn default_grid_symmetric_sample() {
        let s = Sample::new(&[-1.0, 0.0, 1.0]).unwrap();
        let c = build_mad_curve(&s, None).unwrap();
        assert_eq!(c.points.len(), 3);
        let mid = &c.points[1];
        assert_eq!(mid.v, 0.0);
        assert!((mid.delta - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(mid.line_left, 0.0);
        assert_eq!(mid.line_right, 0.0);
        assert!((c.min_delta - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_sample_gives_absolute_deviation() {
        let s = Sample::new(&[3.0]).unwrap();
        let grid = [1.0, 3.0, 7.5];
        let c = build_mad_curve(&s, Some(&grid)).unwrap();
        for p in &c.points {
            assert!((p.delta - (p.v - 3.0).abs()).abs() < 1e-15);
        }
        assert_eq!(c.min_delta, 0.0);
    }

    #[test]
    fn normal_quantile_grid_min_near_population_mad() {
        let d = DistSpec::normal(0.0, 1.0).unwrap();
        let vals: Vec<f64> = (1..=100)
            .map(|i| d.quantile((i as f64 - 0.5) / 100.0).unwrap())
            .collect();
        let s = Sample::new(&vals).unwrap();
        let c = build_mad_curve(&s, None).unwrap();
        let pop = (2.0 / std::f64::consts::PI).sqrt();
        assert!((c.min_delta - pop).abs() < 0.02);
    }

    #[test]
    fn rejects_bad_grids() {
        let s = Sample::new(&[1.0, 2.0]).unwrap();
        assert_eq!(
            build_mad_curve(&s, Some(&[1.0, 1.0])).unwrap_err(),
            CurveError::InvalidGrid
        );
        assert_eq!(
            build_mad_curve(&s, Some(&[2.0, 1.0])).unwrap_err(),
            CurveError::InvalidGrid
        );
        assert_eq!(
            build_mad_curve(&s, Some(&[0.0, f64::NAN])).unwrap_err(),
            CurveError::InvalidGrid
        );
        assert_eq!(
            build_mad_curve(&s, Some(&[])).unwrap_err(),
            CurveError::InvalidGrid
        );
    }

    #[test]
    fn curve_invariants_on_random_sample() {
        let d = DistSpec::normal(1.0, 2.0).unwrap();
        let s = d.sample(
            40,
            SeedSpec {
                master_seed: 11,
                stream_id: 0,
            },
        );
        let lo = s.min() - 2.0;
        let hi = s.max() + 2.0;
        let grid: Vec<f64> = (0..200)
            .map(|i| lo + (hi - lo) * i as f64 / 199.0)
            .collect();
        let c = build_mad_curve(&s, Some(&grid)).unwrap();
        for p in &c.points {
            let scale = 1.0 + p.delta.abs() + p.v.abs();
            assert!((p.delta - (p.delta_plus + p.delta_minus)).abs() <= 1e-12 * scale);
            assert!(p.delta >= p.line_left.max(p.line_right) - 1e-12 * scale);
        }
        // In the far tail the curve meets the asymptote.
        let far = s.max() + 10.0 * s.range();
        let tail = build_mad_curve(&s, Some(&[far])).unwrap();
        let p = &tail.points[0];
        assert!((p.delta - p.line_right).abs() <= 1e-12 * (1.0 + p.delta.abs()));
    }

    #[test]
    fn min_attained_at_median_when_grid_contains_it() {
        let s = Sample::new(&[0.0, 1.0, 2.0, 3.0, 10.0]).unwrap();
        let grid: Vec<f64> = (0..=120).map(|i| -1.0 + i as f64 * 0.1).collect();
        let c = build_mad_curve(&s, Some(&grid)).unwrap();
        let best = c
            .points
            .iter()
            .min_by(|a, b| a.delta.partial_cmp(&b.delta).unwrap())
            .unwrap();
        assert!((best.v - s.median()).abs() < 0.1 + 1e-12);
        assert!(c.min_delta <= best.delta + 1e-12);
    }

    #[test]
    fn symmetric_sample_symmetric_curve() {
        let s = Sample::new(&[-2.0, -1.0, 0.0, 1.0, 2.0]).unwrap();
        let c = build_mad_curve(&s, Some(&[-1.5, 1.5])).unwrap();
        assert!((c.points[0].delta - c.points[1].delta).abs() < 1e-12);
    }
}
