//! Observables computed from simulated series: returns, volatility,
//! empirical distributions, tail exponents, correlations, and the
//! multifractal spectrum.
//!
//! All operations are pure functions of their inputs. One convention used
//! throughout: standard deviations are sample standard deviations with the
//! `n - 1` denominator.

mod acf;
mod lognormal;
mod multifractal;
mod tail;

pub use acf::{autocorrelation, AcfResult};
pub use lognormal::{lognormal_fit, normality_check, LogNormalFit, NormalityCheck};
pub use multifractal::{structure_functions, MultifractalSpectrum};
pub use tail::{
    classify_tail_regime, hill_gamma, optimal_k, BootstrapConfig, RegimeReport, TailEstimate,
    TailRegime, TailSign,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("input is empty")]
    EmptyInput,
    #[error("prices must be positive, found {0}")]
    NonPositivePrice(f64),
    #[error("delta_t {delta_t} must be at least 1 and smaller than the series length {len}")]
    BadDeltaT { delta_t: usize, len: usize },
    #[error("series too short: need at least {need}, got {got}")]
    ShortSeries { need: usize, got: usize },
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("window {window} invalid for series of length {len} (need 2 <= window <= len)")]
    BadWindow { window: usize, len: usize },
    #[error("order statistic k={k} out of range for tail of {n} samples")]
    BadK { k: usize, n: usize },
    #[error("not enough samples on the {0:?} tail: {1}")]
    InsufficientTail(TailSign, usize),
    #[error("tail is degenerate (Hill statistic is zero)")]
    DegenerateTail,
    #[error("series is constant")]
    ConstantSeries,
    #[error("max_lag {max_lag} must be at least 1 and below length/4 = {limit}")]
    BadMaxLag { max_lag: usize, limit: usize },
    #[error("invalid moment order q={0} (need q >= 0)")]
    BadQ(f64),
    #[error("invalid scale d={d} for series of length {len} (need 1 <= d <= len/10)")]
    BadScale { d: usize, len: usize },
    #[error("empty q or d grid")]
    EmptyGrid,
    #[error("structure-function moment vanished at q={q}, d={d}")]
    ZeroMoment { q: f64, d: usize },
    #[error("samples must be strictly positive, found {0}")]
    NonPositiveSample(f64),
}

/// Mean of a slice.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1 denominator).
pub fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / core::f64::consts::SQRT_2)
}

/// Standard normal complementary CDF (upper tail).
pub fn normal_ccdf(x: f64) -> f64 {
    0.5 * libm::erfc(x / core::f64::consts::SQRT_2)
}

/// Log returns over an interval, optionally normalized to zero mean and
/// unit sample standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub values: Vec<f64>,
    pub delta_t: usize,
    pub normalized: bool,
}

/// `values[t] = ln(prices[t + delta_t] / prices[t])`.
pub fn log_returns(prices: &[f64], delta_t: usize) -> Result<ReturnSeries, StatsError> {
    if prices.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    if delta_t == 0 || delta_t >= prices.len() {
        return Err(StatsError::BadDeltaT {
            delta_t,
            len: prices.len(),
        });
    }
    if let Some(&bad) = prices.iter().find(|&&p| !(p > 0.0) || !p.is_finite()) {
        return Err(StatsError::NonPositivePrice(bad));
    }
    let values = prices
        .windows(delta_t + 1)
        .map(|w| (w[delta_t] / w[0]).ln())
        .collect();
    Ok(ReturnSeries {
        values,
        delta_t,
        normalized: false,
    })
}

/// Subtracts the mean and divides by the sample standard deviation.
pub fn normalize(series: &ReturnSeries) -> Result<ReturnSeries, StatsError> {
    if series.values.len() < 2 {
        return Err(StatsError::ShortSeries {
            need: 2,
            got: series.values.len(),
        });
    }
    if series.values.iter().all(|&v| v == series.values[0]) {
        return Err(StatsError::ZeroVariance);
    }
    let m = mean(&series.values);
    let sd = sample_sd(&series.values);
    if sd == 0.0 || !sd.is_finite() {
        return Err(StatsError::ZeroVariance);
    }
    Ok(ReturnSeries {
        values: series.values.iter().map(|x| (x - m) / sd).collect(),
        delta_t: series.delta_t,
        normalized: true,
    })
}

/// Rolling sample standard deviation over windows `[t, t + window)`;
/// output length is `len - window + 1`.
pub fn rolling_volatility(returns: &[f64], window: usize) -> Result<Vec<f64>, StatsError> {
    let len = returns.len();
    if window < 2 || window > len {
        return Err(StatsError::BadWindow { window, len });
    }
    // Running sums; numerically fine for the magnitudes involved here
    // (normalized returns), and O(len) instead of O(len * window).
    let mut sum: f64 = returns[..window].iter().sum();
    let mut sum2: f64 = returns[..window].iter().map(|x| x * x).sum();
    let denom = (window - 1) as f64;
    let w = window as f64;
    let mut out = Vec::with_capacity(len - window + 1);
    let var0 = ((sum2 - sum * sum / w) / denom).max(0.0);
    out.push(var0.sqrt());
    for t in window..len {
        let incoming = returns[t];
        let outgoing = returns[t - window];
        sum += incoming - outgoing;
        sum2 += incoming * incoming - outgoing * outgoing;
        let var = ((sum2 - sum * sum / w) / denom).max(0.0);
        out.push(var.sqrt());
    }
    Ok(out)
}

/// Empirical complementary CDF evaluated at the sorted unique sample
/// values: `ps[i] = P(X >= xs[i])`, which equals `P(X > x)` for any `x`
/// just below `xs[i]`. Strictly decreasing, with values in (0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ccdf {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
}

impl Ccdf {
    /// `P(X > x)` under the empirical distribution.
    pub fn prob_above(&self, x: f64) -> f64 {
        // First unique value strictly above x carries P(X >= that value).
        match self.xs.partition_point(|&v| v <= x) {
            i if i == self.xs.len() => 0.0,
            i => self.ps[i],
        }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// Builds the empirical CCDF of the samples.
pub fn ccdf(samples: &[f64]) -> Result<Ccdf, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN samples"));
    let n = sorted.len() as f64;
    let mut xs = Vec::new();
    let mut ps = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        xs.push(x);
        ps.push((sorted.len() - i) as f64 / n);
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        i = j;
    }
    Ok(Ccdf { xs, ps })
}
