//! Sorted sample container and exact MAD evaluations.
//!
//! A [`Sample`] stores the order statistics together with prefix sums, so the
//! one-sided MAD branches evaluate in O(log n):
//!
//! - `delta_minus(v) = mean((v - x_i) over x_i <= v)` (left branch),
//! - `delta_plus(v)  = mean((x_i - v) over x_i > v)` (right branch),
//! - `delta(v)       = mean(|x_i - v|) = delta_plus(v) + delta_minus(v)`.
//!
//! The left branch is the integral of the empirical CDF, which makes its
//! numerical derivative a CDF estimate; `left_mad_series` tabulates it at the
//! order statistics, where it is piecewise linear with slope `i/n` between
//! consecutive points.
//!
//! Invariants: values sorted ascending and finite; `delta` is convex with
//! minimum at the median; `sd_pop` uses the population denominator `n`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("sample is empty")]
    EmptyInput,
    #[error("non-finite value at input index {index}")]
    NonFiniteValue { index: usize },
}

/// Sorted sample with cached summary statistics.
///
/// `sd_pop` divides by `n`, not `n - 1`: the shape diagnostics built on top
/// compare the sample MAD against the same-denominator standard deviation.
#[derive(Debug, Clone)]
pub struct Sample {
    values: Vec<f64>,
    /// prefix[k] = sum of the k smallest values, prefix[0] = 0.
    prefix: Vec<f64>,
    mean: f64,
    median: f64,
    sd_pop: f64,
    mad_about_median: f64,
}

impl Sample {
    /// Sorts `data` ascending and precomputes mean, median, population
    /// standard deviation, and the MAD about the median.
    pub fn new(data: &[f64]) -> Result<Self, SampleError> {
        if data.is_empty() {
            return Err(SampleError::EmptyInput);
        }
        for (index, &x) in data.iter().enumerate() {
            if !x.is_finite() {
                return Err(SampleError::NonFiniteValue { index });
            }
        }
        let mut values = data.to_vec();
        values.sort_by(|a, b| a.partial_cmp(b).expect("values are finite"));

        let n = values.len();
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for &x in &values {
            acc += x;
            prefix.push(acc);
        }

        let all_equal = values[0] == values[n - 1];
        let mean = if all_equal { values[0] } else { acc / n as f64 };
        let median = if n % 2 == 1 {
            values[n / 2]
        } else {
            0.5 * (values[n / 2 - 1] + values[n / 2])
        };
        let sd_pop = if all_equal {
            0.0
        } else {
            let ss: f64 = values.iter().map(|&x| (x - mean) * (x - mean)).sum();
            (ss / n as f64).sqrt()
        };

        let mut s = Sample {
            values,
            prefix,
            mean,
            median,
            sd_pop,
            mad_about_median: 0.0,
        };
        s.mad_about_median = s.delta(median);
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Order statistics, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn median(&self) -> f64 {
        self.median
    }

    /// Population standard deviation (denominator `n`).
    pub fn sd_pop(&self) -> f64 {
        self.sd_pop
    }

    /// `delta(median)`, the minimum of the MAD function.
    pub fn mad_about_median(&self) -> f64 {
        self.mad_about_median
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn range(&self) -> f64 {
        self.max() - self.min()
    }

    /// Number of values `<= v`.
    fn count_le(&self, v: f64) -> usize {
        self.values.partition_point(|&x| x <= v)
    }

    /// Left MAD branch: `(1/n) * sum over x_i <= v of (v - x_i)`.
    ///
    /// Nondecreasing in `v`, zero for `v < min`, and `v - mean` in the upper
    /// tail. Its derivative is the empirical CDF.
    pub fn delta_minus(&self, v: f64) -> f64 {
        let n = self.values.len();
        let k = self.count_le(v);
        (k as f64 * v - self.prefix[k]) / n as f64
    }

    /// Right MAD branch: `(1/n) * sum over x_i > v of (x_i - v)`.
    pub fn delta_plus(&self, v: f64) -> f64 {
        let n = self.values.len();
        let k = self.count_le(v);
        ((self.prefix[n] - self.prefix[k]) - (n - k) as f64 * v) / n as f64
    }

    /// Mean absolute deviation about `v`; the sum of the two branches.
    pub fn delta(&self, v: f64) -> f64 {
        self.delta_plus(v) + self.delta_minus(v)
    }

    /// `(x_(i), delta_minus(x_(i)))` for every order statistic, via the exact
    /// recurrence `y_i = y_(i-1) + ((i-1)/n) * (x_(i) - x_(i-1))`, `y_1 = 0`.
    pub fn left_mad_series(&self) -> Vec<(f64, f64)> {
        let n = self.values.len();
        let mut out = Vec::with_capacity(n);
        let mut y = 0.0;
        out.push((self.values[0], 0.0));
        for i in 1..n {
            y += (i as f64 / n as f64) * (self.values[i] - self.values[i - 1]);
            out.push((self.values[i], y));
        }
        out
    }
}
