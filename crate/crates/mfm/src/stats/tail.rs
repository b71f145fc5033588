//! Hill tail-index estimation with subsample-bootstrap selection of the
//! order statistic, and an exponential-vs-power-law tail classifier.

use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::model::rng::SimRng;

/// Which tail of the sample distribution to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailSign {
    /// Upper tail: the positive sample values.
    Positive,
    /// Lower tail: absolute values of the negative samples.
    Negative,
}

fn tail_values(samples: &[f64], sign: TailSign) -> Vec<f64> {
    match sign {
        TailSign::Positive => samples.iter().copied().filter(|&x| x > 0.0).collect(),
        TailSign::Negative => samples
            .iter()
            .filter(|&&x| x < 0.0)
            .map(|&x| -x)
            .collect(),
    }
}

/// Hill statistic over the top `k` order statistics of the chosen tail:
/// `gamma = (1/k) sum_{i=1..k} ln(X_(n-i+1) / X_(n-k))`.
///
/// The tail index of the cumulative distribution is `alpha = 1/gamma`.
pub fn hill_gamma(samples: &[f64], k: usize, sign: TailSign) -> Result<f64, StatsError> {
    let mut tail = tail_values(samples, sign);
    let n = tail.len();
    if n < 2 {
        return Err(StatsError::InsufficientTail(sign, n));
    }
    if k == 0 || k >= n {
        return Err(StatsError::BadK { k, n });
    }
    tail.sort_by(|a, b| b.partial_cmp(a).expect("non-NaN samples"));
    let x_k = tail[k];
    let sum: f64 = tail[..k].iter().map(|&x| (x / x_k).ln()).sum();
    Ok(sum / k as f64)
}

/// Subsample-bootstrap configuration for the order-statistic search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    /// Number of subsamples B.
    pub subsamples: usize,
    /// Subsample size as a fraction of the tail size.
    pub subsample_fraction: f64,
    /// Smallest candidate k.
    pub k_min: usize,
    /// Largest candidate k as a fraction of the tail size.
    pub k_max_fraction: f64,
    /// Number of geometrically spaced candidates.
    pub grid_points: usize,
    /// Seed for the bootstrap's own generator (independent of any
    /// simulation stream).
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            subsamples: 100,
            subsample_fraction: 0.1,
            k_min: 10,
            k_max_fraction: 0.1,
            grid_points: 50,
            seed: 0x5eed_b007,
        }
    }
}

/// Hill estimate with the bootstrap-selected order statistic and the
/// diagnostics that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    /// Tail exponent of the cumulative distribution, `1 / gamma`.
    pub alpha: f64,
    /// Hill statistic at the selected k.
    pub gamma: f64,
    /// Selected order statistic.
    pub k: usize,
    /// Full-sample Hill statistic over the scanned grid.
    pub k_diagnostics: Vec<(usize, f64)>,
    pub tail_sign: TailSign,
    /// Number of samples on the estimated tail.
    pub n_tail: usize,
    /// Full-sample Hill statistic in the flattest stretch of the gamma-k
    /// curve (the plateau the bootstrap deviations are measured against).
    pub plateau_gamma: f64,
    /// Relative slope of gamma against ln k over the upper half of the
    /// grid, where sampling noise is small. Near zero when gamma settles
    /// on a plateau; large when it drifts with k throughout.
    pub plateau_drift: f64,
    /// Set when the drift exceeds the plateau threshold — the tail is then
    /// not convincingly power-law (e.g. exponential decay).
    pub plateau_absent: bool,
    /// Set when the tail has fewer than 1000 samples.
    pub small_sample: bool,
}

/// Upper-half drift above this flags the absence of a Hill plateau.
/// Calibrated on tails of 1e5 samples: exact Pareto sits near 0.003,
/// exponential and half-Gaussian near 0.24.
const PLATEAU_DRIFT_THRESHOLD: f64 = 0.15;

fn geometric_grid(k_lo: usize, k_hi: usize, points: usize) -> Vec<usize> {
    let mut grid: Vec<usize> = (0..points)
        .map(|i| {
            let f = i as f64 / (points - 1).max(1) as f64;
            let v = (k_lo as f64) * ((k_hi as f64) / (k_lo as f64)).powf(f);
            v.round() as usize
        })
        .collect();
    grid.dedup();
    grid
}

/// Prefix sums of logs of a descending-sorted tail; `gamma(k)` in O(1).
struct HillTable {
    log_prefix: Vec<f64>,
    logs: Vec<f64>,
}

impl HillTable {
    fn new(sorted_desc: &[f64]) -> Self {
        let logs: Vec<f64> = sorted_desc.iter().map(|&x| x.ln()).collect();
        let mut log_prefix = Vec::with_capacity(logs.len() + 1);
        let mut acc = 0.0;
        log_prefix.push(0.0);
        for &l in &logs {
            acc += l;
            log_prefix.push(acc);
        }
        HillTable { log_prefix, logs }
    }

    fn gamma(&self, k: usize) -> f64 {
        self.log_prefix[k] / k as f64 - self.logs[k]
    }
}

/// Scans a geometric k-grid, measures for each candidate the mean-squared
/// deviation of subsample Hill estimates (at the proportionally rescaled
/// order statistic) from the full-sample plateau, and returns the estimate
/// at the minimizing k.
pub fn optimal_k(
    samples: &[f64],
    sign: TailSign,
    cfg: &BootstrapConfig,
) -> Result<TailEstimate, StatsError> {
    let mut tail = tail_values(samples, sign);
    let n = tail.len();
    if n < 30 {
        return Err(StatsError::InsufficientTail(sign, n));
    }
    tail.sort_by(|a, b| b.partial_cmp(a).expect("non-NaN samples"));

    let k_lo = cfg.k_min.clamp(1, n - 1);
    let k_hi = ((n as f64 * cfg.k_max_fraction) as usize).clamp(k_lo, n - 1);
    let grid = geometric_grid(k_lo, k_hi, cfg.grid_points);

    let table = HillTable::new(&tail);
    let full_gammas: Vec<(usize, f64)> = grid.iter().map(|&k| (k, table.gamma(k))).collect();

    // Plateau: the flattest window of the gamma-k curve. A global median
    // would be pulled off by regions where Hill is systematically biased
    // (e.g. the pile-up of order statistics under an upper truncation).
    let gammas: Vec<f64> = full_gammas.iter().map(|&(_, g)| g).collect();
    let window = (gammas.len() / 5).max(3).min(gammas.len());
    let mut plateau = median(&gammas);
    let mut best_spread = f64::INFINITY;
    for start in 0..=gammas.len() - window {
        let w = &gammas[start..start + window];
        let lo = w.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let med = median(w);
        let spread = if med.abs() > 1e-300 {
            (hi - lo) / med.abs()
        } else {
            f64::INFINITY
        };
        if spread < best_spread {
            best_spread = spread;
            plateau = med;
        }
    }

    // Drift: relative slope of gamma against ln k over the upper half of
    // the grid, where the estimator noise is smallest. A power-law tail
    // settles there; exponential-type tails keep drifting.
    let drift = {
        let upper = &full_gammas[full_gammas.len() / 2..];
        let xs: Vec<f64> = upper.iter().map(|&(k, _)| (k as f64).ln()).collect();
        let ys: Vec<f64> = upper.iter().map(|&(_, g)| g).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = xs.iter().map(|a| (a - mx) * (a - mx)).sum();
        if sxx > 0.0 && my.abs() > 1e-300 {
            (sxy / sxx / my).abs()
        } else {
            0.0
        }
    };

    // Subsample bootstrap.
    let n_sub = ((n as f64 * cfg.subsample_fraction).round() as usize).clamp(20, n - 1);
    let scale = n_sub as f64 / n as f64;
    let k_subs: Vec<usize> = grid
        .iter()
        .map(|&k| ((k as f64 * scale).round() as usize).clamp(1, n_sub - 1))
        .collect();
    let max_k_sub = *k_subs.iter().max().expect("non-empty grid");

    let mut rng = SimRng::seed_from_u64(cfg.seed);
    let mut mse = vec![0.0f64; grid.len()];
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut sub = vec![0.0f64; n_sub];
    for _ in 0..cfg.subsamples {
        // Partial Fisher-Yates: the first n_sub entries become a uniform
        // without-replacement draw.
        for j in 0..n_sub {
            let r = j + (rng.uniform() * (n - j) as f64) as usize;
            pool.swap(j, r.min(n - 1));
        }
        for (dst, &idx) in sub.iter_mut().zip(&pool[..n_sub]) {
            *dst = tail[idx as usize];
        }
        // Only the top max_k_sub + 1 order statistics matter.
        sub.select_nth_unstable_by(max_k_sub, |a, b| b.partial_cmp(a).expect("non-NaN"));
        sub[..=max_k_sub].sort_by(|a, b| b.partial_cmp(a).expect("non-NaN"));
        let sub_table = HillTable::new(&sub[..=max_k_sub]);
        for (i, &k_sub) in k_subs.iter().enumerate() {
            let g = sub_table.gamma(k_sub);
            let d = g - plateau;
            mse[i] += d * d;
        }
    }

    let best = mse
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite mse"))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    let (k_star, gamma) = full_gammas[best];
    if gamma <= 0.0 {
        return Err(StatsError::DegenerateTail);
    }

    Ok(TailEstimate {
        alpha: 1.0 / gamma,
        gamma,
        k: k_star,
        k_diagnostics: full_gammas,
        tail_sign: sign,
        n_tail: n,
        plateau_gamma: plateau,
        plateau_drift: drift,
        plateau_absent: drift > PLATEAU_DRIFT_THRESHOLD,
        small_sample: n < 1000,
    })
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    v[v.len() / 2]
}

/// Tail regime decided by comparing maximum log-likelihoods of an
/// exponential and a power-law (Pareto) model on the exceedances above the
/// 95th percentile of the tail values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailRegime {
    PowerLaw,
    Exponential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: TailRegime,
    /// Log-likelihood of the power-law model at its MLE.
    pub ll_power_law: f64,
    /// Log-likelihood of the exponential model at its MLE.
    pub ll_exponential: f64,
    /// Threshold (95th percentile of tail values).
    pub threshold: f64,
    pub n_exceedances: usize,
    /// Pareto MLE exponent on the exceedances.
    pub alpha_mle: f64,
}

/// Classifies the chosen tail as power-law or exponential.
pub fn classify_tail_regime(samples: &[f64], sign: TailSign) -> Result<RegimeReport, StatsError> {
    let mut tail = tail_values(samples, sign);
    let n = tail.len();
    if n < 100 {
        return Err(StatsError::InsufficientTail(sign, n));
    }
    tail.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN samples"));
    let threshold = tail[((n - 1) as f64 * 0.95) as usize];
    let exceed: Vec<f64> = tail.iter().copied().filter(|&x| x > threshold).collect();
    let m = exceed.len();
    if m < 20 {
        return Err(StatsError::InsufficientTail(sign, m));
    }
    let mf = m as f64;

    // Exponential above the threshold: f(y) = (1/beta) exp(-(y - u)/beta).
    let beta = exceed.iter().map(|&y| y - threshold).sum::<f64>() / mf;
    let ll_exponential = -mf * beta.ln() - mf;

    // Pareto above the threshold: f(y) = (a/u) (y/u)^-(a+1).
    let s: f64 = exceed.iter().map(|&y| (y / threshold).ln()).sum();
    let alpha_mle = mf / s;
    let ll_power_law = mf * alpha_mle.ln() - mf * threshold.ln() - mf - s;

    Ok(RegimeReport {
        regime: if ll_power_law > ll_exponential {
            TailRegime::PowerLaw
        } else {
            TailRegime::Exponential
        },
        ll_power_law,
        ll_exponential,
        threshold,
        n_exceedances: m,
        alpha_mle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hill_gamma_hand_example() {
        // Samples {e, e, e^2}, k = 1: gamma = ln(e^2 / e) = 1.
        let e = core::f64::consts::E;
        let g = hill_gamma(&[e, e, e * e], 1, TailSign::Positive).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hill_gamma_degenerate_equal_samples() {
        let g = hill_gamma(&[2.0, 2.0, 2.0, 2.0], 2, TailSign::Positive).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn hill_gamma_tail_sign_symmetry() {
        let samples = [1.5, -2.0, 3.0, -0.5, -4.5, 2.2, -1.1];
        let negated: Vec<f64> = samples.iter().map(|&x| -x).collect();
        for k in 1..3 {
            let pos = hill_gamma(&samples, k, TailSign::Positive).unwrap();
            let neg = hill_gamma(&negated, k, TailSign::Negative).unwrap();
            assert_eq!(pos, neg);
        }
    }

    #[test]
    fn hill_gamma_pareto_consistency() {
        let mut rng = SimRng::seed_from_u64(91);
        let n = 1_000_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| (1.0 - rng.uniform()).powf(-1.0 / 3.0))
            .collect();
        let g = hill_gamma(&samples, 1000, TailSign::Positive).unwrap();
        assert!((g - 1.0 / 3.0).abs() < 0.05, "gamma {g}");

        // Error shrinks from n = 1e4 to n = 1e6 with k = sqrt(n).
        let small = &samples[..10_000];
        let g_small = hill_gamma(small, 100, TailSign::Positive).unwrap();
        let g_large = hill_gamma(&samples, 1000, TailSign::Positive).unwrap();
        assert!(
            (g_large - 1.0 / 3.0).abs() <= (g_small - 1.0 / 3.0).abs() + 0.01,
            "no consistency gain: {g_small} vs {g_large}"
        );
    }

    #[test]
    fn hill_gamma_rejects_bad_k() {
        let s = [1.0, 2.0, 3.0];
        assert!(hill_gamma(&s, 0, TailSign::Positive).is_err());
        assert!(hill_gamma(&s, 3, TailSign::Positive).is_err());
    }

    #[test]
    fn optimal_k_recovers_pareto_alpha() {
        let mut rng = SimRng::seed_from_u64(23);
        let n = 100_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| (1.0 - rng.uniform()).powf(-1.0 / 3.0))
            .collect();
        let est = optimal_k(&samples, TailSign::Positive, &BootstrapConfig::default()).unwrap();
        assert!((est.alpha - 3.0).abs() < 0.2, "alpha {}", est.alpha);
        assert!(!est.plateau_absent, "drift {}", est.plateau_drift);
        assert!(!est.small_sample);
        assert!((est.gamma * est.alpha - 1.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_k_flags_exponential_drift() {
        let mut rng = SimRng::seed_from_u64(29);
        let samples: Vec<f64> = (0..100_000).map(|_| -(1.0 - rng.uniform()).ln()).collect();
        let est = optimal_k(&samples, TailSign::Positive, &BootstrapConfig::default()).unwrap();
        assert!(
            est.plateau_absent,
            "exponential tail not flagged, drift {}",
            est.plateau_drift
        );
    }

    #[test]
    fn optimal_k_requires_tail_mass() {
        let samples = vec![-1.0; 500];
        assert!(optimal_k(&samples, TailSign::Positive, &BootstrapConfig::default()).is_err());
    }

    #[test]
    fn classify_pareto_as_power_law() {
        let mut rng = SimRng::seed_from_u64(31);
        let samples: Vec<f64> = (0..50_000)
            .map(|_| (1.0 - rng.uniform()).powf(-1.0 / 2.5))
            .collect();
        let rep = classify_tail_regime(&samples, TailSign::Positive).unwrap();
        assert_eq!(rep.regime, TailRegime::PowerLaw);
        assert!((rep.alpha_mle - 2.5).abs() < 0.2, "alpha {}", rep.alpha_mle);
    }

    #[test]
    fn classify_exponential_as_exponential() {
        let mut rng = SimRng::seed_from_u64(37);
        let samples: Vec<f64> = (0..50_000).map(|_| -(1.0 - rng.uniform()).ln()).collect();
        let rep = classify_tail_regime(&samples, TailSign::Positive).unwrap();
        assert_eq!(rep.regime, TailRegime::Exponential);
    }

    #[test]
    fn classify_gaussian_as_not_power_law() {
        let mut rng = SimRng::seed_from_u64(41);
        let samples: Vec<f64> = (0..50_000).map(|_| rng.standard_normal()).collect();
        let rep = classify_tail_regime(&samples, TailSign::Positive).unwrap();
        assert_eq!(rep.regime, TailRegime::Exponential);
    }
}
