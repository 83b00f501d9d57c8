//! Reference distributions: CDFs, quantiles, population MAD, and
//! reproducible inverse-CDF sampling.
//!
//! Sampling is keyed by a [`SeedSpec`]: a counter-based generator (ChaCha12)
//! seeded by `master_seed` with the block counter stream set to `stream_id`.
//! Distinct `(master_seed, stream_id)` pairs give statistically independent
//! streams, and every draw is a pure function of the pair, so results are
//! bit-reproducible across runs, platforms, and thread schedules.
//!
//! The five built-in normal mixtures used by the simulation benchmark are
//! constructed by [`builtin`]; the smooth-comb mixture has two published
//! variants of its component variances, selected by [`ScVariant`].

mod special;

use crate::sample::Sample;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub use special::{erf, erfc, inc_beta, ln_gamma, norm_cdf, norm_pdf, norm_quantile};

#[derive(Debug, Error, PartialEq)]
pub enum DistError {
    #[error("invalid parameter: {0}")]
    BadParam(&'static str),
    #[error("probability {0} is outside the open interval (0, 1)")]
    OutOfRange(f64),
    #[error("population MAD is available for normal and normal-mixture distributions only")]
    UnsupportedKind,
    #[error("unknown distribution name: {0:?}")]
    UnknownName(String),
}

/// One normal component of a mixture: `weight * N(mu, sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Component {
    pub weight: f64,
    pub mu: f64,
    pub sigma: f64,
}

/// A validated distribution. Construct through the kind-specific
/// constructors, which check parameter domains.
#[derive(Debug, Clone, PartialEq)]
pub enum DistSpec {
    Normal {
        mu: f64,
        sigma: f64,
    },
    Logistic {
        location: f64,
        scale: f64,
    },
    Laplace {
        location: f64,
        scale: f64,
    },
    Uniform {
        a: f64,
        b: f64,
    },
    Beta {
        alpha: f64,
        beta: f64,
    },
    /// Student t with 3 degrees of freedom (heavy tails, finite variance 3).
    T3,
    Exponential {
        rate: f64,
    },
    Mixture {
        components: Vec<Component>,
    },
}

impl DistSpec {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self, DistError> {
        if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
            return Err(DistError::BadParam("normal requires finite mu, sigma > 0"));
        }
        Ok(DistSpec::Normal { mu, sigma })
    }

    pub fn logistic(location: f64, scale: f64) -> Result<Self, DistError> {
        if !location.is_finite() || !scale.is_finite() || scale <= 0.0 {
            return Err(DistError::BadParam(
                "logistic requires finite location, scale > 0",
            ));
        }
        Ok(DistSpec::Logistic { location, scale })
    }

    pub fn laplace(location: f64, scale: f64) -> Result<Self, DistError> {
        if !location.is_finite() || !scale.is_finite() || scale <= 0.0 {
            return Err(DistError::BadParam(
                "laplace requires finite location, scale > 0",
            ));
        }
        Ok(DistSpec::Laplace { location, scale })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self, DistError> {
        if !a.is_finite() || !b.is_finite() || a >= b {
            return Err(DistError::BadParam("uniform requires finite a < b"));
        }
        Ok(DistSpec::Uniform { a, b })
    }

    pub fn beta(alpha: f64, beta: f64) -> Result<Self, DistError> {
        if !alpha.is_finite() || !beta.is_finite() || alpha <= 0.0 || beta <= 0.0 {
            return Err(DistError::BadParam("beta requires alpha > 0 and beta > 0"));
        }
        Ok(DistSpec::Beta { alpha, beta })
    }

    pub fn t3() -> Self {
        DistSpec::T3
    }

    pub fn exponential(rate: f64) -> Result<Self, DistError> {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(DistError::BadParam("exponential requires rate > 0"));
        }
        Ok(DistSpec::Exponential { rate })
    }

    pub fn mixture(components: Vec<Component>) -> Result<Self, DistError> {
        if components.is_empty() {
            return Err(DistError::BadParam(
                "mixture requires at least one component",
            ));
        }
        let mut total = 0.0;
        for c in &components {
            if !c.weight.is_finite() || c.weight <= 0.0 {
                return Err(DistError::BadParam("mixture weights must be positive"));
            }
            if !c.mu.is_finite() || !c.sigma.is_finite() || c.sigma <= 0.0 {
                return Err(DistError::BadParam(
                    "mixture components require finite mu, sigma > 0",
                ));
            }
            total += c.weight;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(DistError::BadParam("mixture weights must sum to 1"));
        }
        Ok(DistSpec::Mixture { components })
    }

    /// Cumulative distribution function, nondecreasing with limits 0 and 1.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            DistSpec::Normal { mu, sigma } => norm_cdf((x - mu) / sigma),
            DistSpec::Logistic { location, scale } => {
                let z = (x - location) / scale;
                1.0 / (1.0 + (-z).exp())
            }
            DistSpec::Laplace { location, scale } => {
                let z = (x - location) / scale;
                if z < 0.0 {
                    0.5 * z.exp()
                } else {
                    1.0 - 0.5 * (-z).exp()
                }
            }
            DistSpec::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            DistSpec::Beta { alpha, beta } => inc_beta(*alpha, *beta, x),
            DistSpec::T3 => {
                // Closed form for 3 degrees of freedom.
                let u = x / 3.0f64.sqrt();
                0.5 + (u / (1.0 + u * u) + u.atan()) / std::f64::consts::PI
            }
            DistSpec::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            DistSpec::Mixture { components } => components
                .iter()
                .map(|c| c.weight * norm_cdf((x - c.mu) / c.sigma))
                .sum(),
        }
    }

    /// Quantile function. Closed forms where available, otherwise a bracketed
    /// inversion of the CDF; the result `v` satisfies `|cdf(v) - p| <= 1e-9`
    /// (`1e-8` for beta).
    pub fn quantile(&self, p: f64) -> Result<f64, DistError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(DistError::OutOfRange(p));
        }
        Ok(match self {
            DistSpec::Normal { mu, sigma } => mu + sigma * norm_quantile(p),
            DistSpec::Logistic { location, scale } => location + scale * (p / (1.0 - p)).ln(),
            DistSpec::Laplace { location, scale } => {
                if p < 0.5 {
                    location + scale * (2.0 * p).ln()
                } else {
                    location - scale * (2.0 * (1.0 - p)).ln()
                }
            }
            DistSpec::Uniform { a, b } => a + (b - a) * p,
            DistSpec::Beta { alpha, beta } => beta_quantile(*alpha, *beta, p),
            DistSpec::T3 => {
                let (mut lo, mut hi) = (-2.0, 2.0);
                while self.cdf(lo) > p {
                    lo *= 2.0;
                }
                while self.cdf(hi) < p {
                    hi *= 2.0;
                }
                bisect_cdf(|x| self.cdf(x), lo, hi, p, 1e-12)
            }
            DistSpec::Exponential { rate } => -(-p).ln_1p() / rate,
            DistSpec::Mixture { components } => {
                let lo = components
                    .iter()
                    .map(|c| c.mu - 12.0 * c.sigma)
                    .fold(f64::INFINITY, f64::min);
                let hi = components
                    .iter()
                    .map(|c| c.mu + 12.0 * c.sigma)
                    .fold(f64::NEG_INFINITY, f64::max);
                bisect_cdf(|x| self.cdf(x), lo, hi, p, 1e-12)
            }
        })
    }

    /// Population MAD `E|X - v|`, for normal and normal-mixture kinds.
    ///
    /// For `N(mu, sigma^2)` with `z = (v - mu)/sigma` the closed form is
    /// `sigma * (2 phi(z) + z (2 Phi(z) - 1))`; a mixture is the weighted sum.
    pub fn population_mad(&self, v: f64) -> Result<f64, DistError> {
        fn one(mu: f64, sigma: f64, v: f64) -> f64 {
            let z = (v - mu) / sigma;
            sigma * (2.0 * norm_pdf(z) + z * (2.0 * norm_cdf(z) - 1.0))
        }
        match self {
            DistSpec::Normal { mu, sigma } => Ok(one(*mu, *sigma, v)),
            DistSpec::Mixture { components } => Ok(components
                .iter()
                .map(|c| c.weight * one(c.mu, c.sigma, v))
                .sum()),
            _ => Err(DistError::UnsupportedKind),
        }
    }

    /// Draws `n` values by inverse-CDF sampling (mixtures draw a component
    /// index, then a normal variate) and returns them as a [`Sample`].
    ///
    /// Bit-reproducible for a fixed [`SeedSpec`] regardless of thread
    /// schedule, since the generator depends only on the seed pair.
    pub fn sample(&self, n: usize, seed: SeedSpec) -> Sample {
        assert!(n >= 1, "sample size must be at least 1");
        let mut rng = ChaCha12Rng::seed_from_u64(seed.master_seed);
        rng.set_stream(seed.stream_id);
        let mut draws = Vec::with_capacity(n);
        match self {
            DistSpec::Mixture { components } => {
                for _ in 0..n {
                    let u1 = unit_open(&mut rng);
                    let u2 = unit_open(&mut rng);
                    let c = pick_component(components, u1);
                    draws.push(c.mu + c.sigma * norm_quantile(u2));
                }
            }
            _ => {
                for _ in 0..n {
                    let u = unit_open(&mut rng);
                    draws.push(self.quantile(u).expect("u lies in (0, 1)"));
                }
            }
        }
        Sample::new(&draws).expect("inverse-CDF draws are finite")
    }
}

/// Seed pair identifying one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

/// Uniform draw on the open interval (0, 1): 53-bit midpoints.
fn unit_open(rng: &mut ChaCha12Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

fn pick_component(components: &[Component], u: f64) -> &Component {
    let mut acc = 0.0;
    for c in components {
        acc += c.weight;
        if u <= acc {
            return c;
        }
    }
    components.last().expect("mixture is non-empty")
}

/// Bisection on `f` over `[lo, hi]`, stopping when `|f(mid) - p| <= tol` or
/// the bracket is exhausted.
fn bisect_cdf<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, p: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let c = f(mid);
        if (c - p).abs() <= tol {
            return mid;
        }
        if c < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Beta quantile by bisection in log space, where solutions near 0 (common
/// for shape parameters below 1) keep full relative resolution. Solutions
/// near 1 are reflected through `I_x(a, b) = 1 - I_{1-x}(b, a)`.
fn beta_quantile(a: f64, b: f64, p: f64) -> f64 {
    if b == 1.0 {
        return p.powf(1.0 / a);
    }
    if a == 1.0 {
        return -((-p).ln_1p() / b).exp_m1();
    }
    if p > 0.5 {
        return 1.0 - beta_quantile(b, a, 1.0 - p);
    }
    let (mut lo, mut hi) = (-745.0f64, 0.0f64);
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        let x = mid.exp();
        let c = inc_beta(a, b, x);
        if (c - p).abs() <= 1e-10 {
            return x;
        }
        if c < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// Built-in benchmark mixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Builtin {
    /// Standard normal as a one-component mixture.
    #[serde(rename = "G")]
    G,
    /// Smoothly falling staircase of eight shrinking components.
    #[serde(rename = "SS")]
    Ss,
    /// Sharp central spike over a broad base.
    #[serde(rename = "OU")]
    Ou,
    /// Symmetric bimodal pair.
    #[serde(rename = "SB")]
    Sb,
    /// Smooth comb of six components with geometric weights.
    #[serde(rename = "SC")]
    Sc,
}

impl Builtin {
    pub fn all() -> [Builtin; 5] {
        [
            Builtin::G,
            Builtin::Ss,
            Builtin::Ou,
            Builtin::Sb,
            Builtin::Sc,
        ]
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Builtin::G => "G",
            Builtin::Ss => "SS",
            Builtin::Ou => "OU",
            Builtin::Sb => "SB",
            Builtin::Sc => "SC",
        };
        f.write_str(s)
    }
}

impl FromStr for Builtin {
    type Err = DistError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "G" => Ok(Builtin::G),
            "SS" => Ok(Builtin::Ss),
            "OU" => Ok(Builtin::Ou),
            "SB" => Ok(Builtin::Sb),
            "SC" => Ok(Builtin::Sc),
            _ => Err(DistError::UnknownName(s.to_string())),
        }
    }
}

/// Variant selector for the smooth-comb component standard deviations, which
/// appear in the literature both as `(32/63) / 2^l` and as `(32/63)^l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum ScVariant {
    #[default]
    #[serde(rename = "marron_wand")]
    MarronWand,
    #[serde(rename = "paper_literal")]
    PaperLiteral,
}

/// Constructs one of the built-in mixtures. All of them are returned as
/// `Mixture`, including the single-component `G`, so downstream code treats
/// them uniformly.
pub fn builtin(name: Builtin, sc: ScVariant) -> DistSpec {
    let components = match name {
        Builtin::G => vec![Component {
            weight: 1.0,
            mu: 0.0,
            sigma: 1.0,
        }],
        Builtin::Ss => (0..8)
            .map(|l| {
                let r = (2.0f64 / 3.0).powi(l);
                Component {
                    weight: 0.125,
                    mu: 3.0 * (r - 1.0),
                    sigma: r,
                }
            })
            .collect(),
        Builtin::Ou => vec![
            Component {
                weight: 0.1,
                mu: 0.0,
                sigma: 1.0,
            },
            Component {
                weight: 0.9,
                mu: 0.0,
                sigma: 0.1,
            },
        ],
        Builtin::Sb => vec![
            Component {
                weight: 0.5,
                mu: -1.5,
                sigma: 0.5,
            },
            Component {
                weight: 0.5,
                mu: 1.5,
                sigma: 0.5,
            },
        ],
        Builtin::Sc => (0..6)
            .map(|l| {
                let pow = 2.0f64.powi(l);
                Component {
                    weight: 2.0f64.powi(5 - l) / 63.0,
                    mu: (65.0 - 96.0 / pow) / 21.0,
                    sigma: match sc {
                        ScVariant::MarronWand => (32.0 / 63.0) / pow,
                        ScVariant::PaperLiteral => (32.0f64 / 63.0).powi(l),
                    },
                }
            })
            .collect(),
    };
    DistSpec::mixture(components).expect("built-in mixtures are valid")
}
