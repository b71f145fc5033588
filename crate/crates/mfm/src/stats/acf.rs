//! Sample autocorrelation.

use serde::{Deserialize, Serialize};

use super::StatsError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfResult {
    pub lags: Vec<usize>,
    pub acf: Vec<f64>,
    /// White-noise band `1.96 / sqrt(T)`.
    pub noise_band: f64,
}

/// Standard biased sample autocorrelation at lags `1..=max_lag`,
/// normalized by the lag-0 variance.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Result<AcfResult, StatsError> {
    let len = series.len();
    if max_lag == 0 || max_lag * 4 >= len {
        return Err(StatsError::BadMaxLag {
            max_lag,
            limit: len / 4,
        });
    }
    let m = super::mean(series);
    let c0: f64 = series.iter().map(|x| (x - m) * (x - m)).sum();
    if c0 == 0.0 {
        return Err(StatsError::ConstantSeries);
    }
    let mut lags = Vec::with_capacity(max_lag);
    let mut acf = Vec::with_capacity(max_lag);
    for h in 1..=max_lag {
        let ch: f64 = (0..len - h)
            .map(|t| (series[t] - m) * (series[t + h] - m))
            .sum();
        lags.push(h);
        acf.push(ch / c0);
    }
    Ok(AcfResult {
        lags,
        acf,
        noise_band: 1.96 / (len as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rng::SimRng;

    #[test]
    fn white_noise_stays_in_band() {
        let mut rng = SimRng::seed_from_u64(3);
        let series: Vec<f64> = (0..20_000).map(|_| rng.standard_normal()).collect();
        let res = autocorrelation(&series, 100).unwrap();
        let inside = res
            .acf
            .iter()
            .filter(|a| a.abs() < res.noise_band)
            .count();
        assert!(
            inside as f64 >= 0.95 * res.acf.len() as f64,
            "only {inside} of {} inside band",
            res.acf.len()
        );
    }

    #[test]
    fn periodic_series_has_unit_acf_at_period() {
        let series: Vec<f64> = (0..1000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let res = autocorrelation(&series, 4).unwrap();
        assert!((res.acf[1] - 1.0).abs() < 1e-2, "lag-2 acf {}", res.acf[1]);
        assert!(res.acf[0] < -0.9);
    }

    #[test]
    fn rejects_constant_series() {
        let series = vec![2.0; 100];
        assert_eq!(autocorrelation(&series, 5), Err(StatsError::ConstantSeries));
    }

    #[test]
    fn rejects_excessive_lag() {
        let series: Vec<f64> = (0..40).map(|i| i as f64).collect();
        assert!(autocorrelation(&series, 10).is_err());
        assert!(autocorrelation(&series, 9).is_ok());
    }
}
