//! Log-normal fit of the volatility bulk, and a moment/KS normality check.

use serde::{Deserialize, Serialize};

use super::{normal_cdf, StatsError};

/// Fraction trimmed from each side before fitting the bulk.
const TRIM_PER_SIDE: f64 = 0.05;
/// Standard normal quantile at 1 - TRIM_PER_SIDE.
const Z_TRIM: f64 = 1.6448536269514722;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogNormalFit {
    pub mu_ln: f64,
    pub sigma_ln: f64,
    /// Kolmogorov-Smirnov distance between the full-sample empirical CDF
    /// and the fitted log-normal, taken over the central 90% of samples.
    pub ks_distance: f64,
}

/// Moment fit of a log-normal to the central 90% of the samples.
///
/// The trimmed log-sd underestimates the underlying sigma (the sd of a
/// standard normal truncated to its central 90% is ~0.789), so the trimmed
/// moment is rescaled by that factor before reporting.
pub fn lognormal_fit(samples: &[f64]) -> Result<LogNormalFit, StatsError> {
    if samples.len() < 20 {
        return Err(StatsError::ShortSeries {
            need: 20,
            got: samples.len(),
        });
    }
    if let Some(&bad) = samples.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
        return Err(StatsError::NonPositiveSample(bad));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN samples"));
    let n = sorted.len();
    let lo = (n as f64 * TRIM_PER_SIDE).floor() as usize;
    let hi = (n as f64 * (1.0 - TRIM_PER_SIDE)).ceil() as usize;
    let bulk = &sorted[lo..hi];
    if bulk[bulk.len() - 1] == bulk[0] {
        return Err(StatsError::ZeroVariance);
    }

    let logs: Vec<f64> = bulk.iter().map(|x| x.ln()).collect();
    let mu_ln = super::mean(&logs);
    let sd_trimmed = super::sample_sd(&logs);
    if sd_trimmed == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    // Variance of a standard normal truncated to [-z, z] covering mass c:
    // 1 - 2 z phi(z) / c.
    let phi_z = (-Z_TRIM * Z_TRIM / 2.0).exp() / (2.0 * core::f64::consts::PI).sqrt();
    let c = 1.0 - 2.0 * TRIM_PER_SIDE;
    let shrink = (1.0 - 2.0 * Z_TRIM * phi_z / c).sqrt();
    let sigma_ln = sd_trimmed / shrink;

    // KS over the bulk region, against the fitted (untruncated) CDF, with
    // the empirical CDF taken over the full sample.
    let nf = n as f64;
    let mut ks: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate().take(hi).skip(lo) {
        let f = normal_cdf((x.ln() - mu_ln) / sigma_ln);
        let ecdf_hi = (i + 1) as f64 / nf;
        let ecdf_lo = i as f64 / nf;
        ks = ks.max((f - ecdf_hi).abs()).max((f - ecdf_lo).abs());
    }

    Ok(LogNormalFit {
        mu_ln,
        sigma_ln,
        ks_distance: ks,
    })
}

/// Summary statistics testing agreement with a Gaussian: KS distance of
/// the standardized sample against the standard normal CDF, plus sample
/// skewness and excess kurtosis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityCheck {
    pub ks_distance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

pub fn normality_check(samples: &[f64]) -> Result<NormalityCheck, StatsError> {
    if samples.len() < 20 {
        return Err(StatsError::ShortSeries {
            need: 20,
            got: samples.len(),
        });
    }
    let m = super::mean(samples);
    let sd = super::sample_sd(samples);
    if sd == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let n = samples.len() as f64;
    let mut z: Vec<f64> = samples.iter().map(|x| (x - m) / sd).collect();
    z.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN samples"));

    let mut ks: f64 = 0.0;
    for (i, &v) in z.iter().enumerate() {
        let f = normal_cdf(v);
        ks = ks
            .max((f - (i + 1) as f64 / n).abs())
            .max((f - i as f64 / n).abs());
    }
    let skewness = z.iter().map(|v| v * v * v).sum::<f64>() / n;
    let excess_kurtosis = z.iter().map(|v| v * v * v * v).sum::<f64>() / n - 3.0;

    Ok(NormalityCheck {
        ks_distance: ks,
        skewness,
        excess_kurtosis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rng::SimRng;

    #[test]
    fn recovers_standard_lognormal_parameters() {
        let mut rng = SimRng::seed_from_u64(55);
        let samples: Vec<f64> = (0..100_000).map(|_| rng.lognormal(0.0, 1.0)).collect();
        let fit = lognormal_fit(&samples).unwrap();
        assert!(fit.mu_ln.abs() < 0.02, "mu {}", fit.mu_ln);
        assert!((fit.sigma_ln - 1.0).abs() < 0.02, "sigma {}", fit.sigma_ln);
        assert!(fit.ks_distance < 0.01, "ks {}", fit.ks_distance);
    }

    #[test]
    fn rejects_constant_input() {
        let samples = vec![2.0; 100];
        assert_eq!(lognormal_fit(&samples), Err(StatsError::ZeroVariance));
    }

    #[test]
    fn rejects_non_positive_samples() {
        let mut samples = vec![1.0; 100];
        samples[3] = 0.0;
        assert!(matches!(
            lognormal_fit(&samples),
            Err(StatsError::NonPositiveSample(_))
        ));
    }

    #[test]
    fn normality_check_accepts_gaussian() {
        let mut rng = SimRng::seed_from_u64(60);
        let samples: Vec<f64> = (0..50_000).map(|_| 5.0 + 0.3 * rng.standard_normal()).collect();
        let check = normality_check(&samples).unwrap();
        assert!(check.ks_distance < 0.01, "ks {}", check.ks_distance);
        assert!(check.skewness.abs() < 0.05);
        assert!(check.excess_kurtosis.abs() < 0.1);
    }

    #[test]
    fn normality_check_rejects_heavy_tails() {
        let mut rng = SimRng::seed_from_u64(61);
        // Pareto-ish heavy-tailed sample fails resoundingly.
        let samples: Vec<f64> = (0..50_000)
            .map(|_| (1.0 - rng.uniform()).powf(-1.0 / 3.0))
            .collect();
        let check = normality_check(&samples).unwrap();
        assert!(check.ks_distance > 0.05 || check.excess_kurtosis > 1.0);
    }
}
