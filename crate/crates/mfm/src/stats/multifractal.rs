//! Structure functions and multifractal scaling exponents.
//!
//! `M_q(d)` is the q-th absolute moment of d-step log-price fluctuations;
//! `zeta_q` is the least-squares slope of `ln M_q(d)` against `ln d` over
//! the provided scale grid. A process is multifractal when `zeta_q` is
//! non-linear in q (for Brownian-like series `zeta_q = q/2`).

use serde::{Deserialize, Serialize};

use super::StatsError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultifractalSpectrum {
    pub q_values: Vec<f64>,
    pub d_values: Vec<usize>,
    /// `moments[qi][di] = M_q(d)`.
    pub moments: Vec<Vec<f64>>,
    /// Fitted exponent per q.
    pub zeta: Vec<f64>,
    /// Standard error of each fitted slope.
    pub zeta_se: Vec<f64>,
    /// Regression R^2 per q.
    pub fit_r2: Vec<f64>,
}

impl MultifractalSpectrum {
    /// `zeta_4 - 2 * zeta_2` and the standard error of that combination;
    /// negative beyond the error signals multifractality. Requires q = 2
    /// and q = 4 in the grid.
    pub fn nonlinearity(&self) -> Option<(f64, f64)> {
        let i2 = self.q_values.iter().position(|&q| (q - 2.0).abs() < 1e-12)?;
        let i4 = self.q_values.iter().position(|&q| (q - 4.0).abs() < 1e-12)?;
        let value = self.zeta[i4] - 2.0 * self.zeta[i2];
        let se = (self.zeta_se[i4].powi(2) + 4.0 * self.zeta_se[i2].powi(2)).sqrt();
        Some((value, se))
    }
}

/// Computes `M_q(d) = mean_t |ln p_{t+d} - ln p_t|^q` on the provided grids
/// and fits `zeta_q` over the full d grid.
pub fn structure_functions(
    prices: &[f64],
    q_values: &[f64],
    d_values: &[usize],
) -> Result<MultifractalSpectrum, StatsError> {
    if q_values.is_empty() || d_values.is_empty() {
        return Err(StatsError::EmptyGrid);
    }
    if let Some(&q) = q_values.iter().find(|&&q| q < 0.0 || !q.is_finite()) {
        return Err(StatsError::BadQ(q));
    }
    let len = prices.len();
    if let Some(&d) = d_values.iter().find(|&&d| d == 0 || d * 10 > len) {
        return Err(StatsError::BadScale { d, len });
    }
    if let Some(&bad) = prices.iter().find(|&&p| !(p > 0.0) || !p.is_finite()) {
        return Err(StatsError::NonPositivePrice(bad));
    }

    let log_p: Vec<f64> = prices.iter().map(|p| p.ln()).collect();
    let mut moments = vec![Vec::with_capacity(d_values.len()); q_values.len()];
    for &d in d_values {
        let count = (len - d) as f64;
        // One pass over the fluctuations per scale, all q at once.
        let mut sums = vec![0.0f64; q_values.len()];
        for t in 0..len - d {
            let a = (log_p[t + d] - log_p[t]).abs();
            for (qi, &q) in q_values.iter().enumerate() {
                sums[qi] += a.powf(q);
            }
        }
        for (qi, sum) in sums.iter().enumerate() {
            moments[qi].push(sum / count);
        }
    }

    let log_d: Vec<f64> = d_values.iter().map(|&d| (d as f64).ln()).collect();
    let mut zeta = Vec::with_capacity(q_values.len());
    let mut zeta_se = Vec::with_capacity(q_values.len());
    let mut fit_r2 = Vec::with_capacity(q_values.len());
    for (qi, &q) in q_values.iter().enumerate() {
        if q == 0.0 {
            // M_0(d) = 1 identically; the slope is exactly zero.
            zeta.push(0.0);
            zeta_se.push(0.0);
            fit_r2.push(1.0);
            continue;
        }
        if let Some(di) = moments[qi].iter().position(|&m| m <= 0.0) {
            return Err(StatsError::ZeroMoment {
                q,
                d: d_values[di],
            });
        }
        let log_m: Vec<f64> = moments[qi].iter().map(|m| m.ln()).collect();
        let (slope, se, r2) = linear_fit(&log_d, &log_m);
        zeta.push(slope);
        zeta_se.push(se);
        fit_r2.push(r2);
    }

    Ok(MultifractalSpectrum {
        q_values: q_values.to_vec(),
        d_values: d_values.to_vec(),
        moments,
        zeta,
        zeta_se,
        fit_r2,
    })
}

/// Least-squares slope with its standard error and R^2.
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = super::mean(x);
    let my = super::mean(y);
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    let se = if x.len() > 2 {
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (slope, se, r2)
}
