//! The analytic return distribution implied by a power-law trader count.
//!
//! When `n` traders are active, one-step returns are Gaussian with variance
//! proportional to `n`. With the trader count following a power law whose
//! cumulative distribution has exponent `zeta_v`, the return density is the
//! mixture `sum_n w_n Gaussian(r; 0, n)` with `w_n ~ n^-(zeta_v + 1)`.
//! Replacing the sum by an integral over `n in [1, inf)` gives the
//! continuum density, proportional to
//! `K(zeta_v + 1/2, zeta_v + 3/2, -r^2/2)` with `K` the Kummer confluent
//! hypergeometric function — equivalently
//! `(r^2/2)^-(zeta_v+1/2) gamma(zeta_v + 1/2, r^2/2)`. Its tail decays as
//! `r^-(2 zeta_v + 1)`, so the cumulative return distribution has exponent
//! `alpha = 2 zeta_v`.
//!
//! Normalization constants are always computed by quadrature, never taken
//! from a closed form.

pub mod quad;
pub mod special;

use thiserror::Error;

use quad::adaptive_simpson;
pub use special::{gamma_p, kummer_m, ln_gamma};

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticError {
    #[error("zeta_v must be positive and finite, got {0}")]
    BadZeta(f64),
    #[error("n_max must be at least 1")]
    BadNMax,
    #[error("Kummer b parameter must not be a non-positive integer, got {0}")]
    BadKummerB(f64),
    #[error("Kummer arguments outside the supported range: a={a}, b={b}, z={z} (large negative z requires b = a + 1)")]
    UnsupportedKummer { a: f64, b: f64, z: f64 },
    #[error("incomplete gamma domain error: a={a}, x={x}")]
    GammaDomain { a: f64, x: f64 },
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("empty evaluation grid")]
    EmptyGrid,
}

/// Finite Gaussian mixture with power-law weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureParams {
    pub zeta_v: f64,
    pub n_max: usize,
    /// Normalized weights `n^-(zeta_v+1) / normalization`.
    weights: Vec<f64>,
    /// Sum of the raw weights `sum_n n^-(zeta_v+1)` (computed, not assumed).
    pub normalization: f64,
}

impl MixtureParams {
    pub fn new(zeta_v: f64, n_max: usize) -> Result<Self, AnalyticError> {
        if !(zeta_v.is_finite() && zeta_v > 0.0) {
            return Err(AnalyticError::BadZeta(zeta_v));
        }
        if n_max == 0 {
            return Err(AnalyticError::BadNMax);
        }
        let raw: Vec<f64> = (1..=n_max)
            .map(|n| (n as f64).powf(-(zeta_v + 1.0)))
            .collect();
        let normalization: f64 = raw.iter().sum();
        let weights = raw.iter().map(|w| w / normalization).collect();
        Ok(MixtureParams {
            zeta_v,
            n_max,
            weights,
            normalization,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Density of the finite mixture at `r`. Each conditional is a proper
/// Gaussian with variance `n`, and the weights sum to one, so the mixture
/// integrates to one by construction. Even in `r`.
pub fn mixture_density(r: f64, params: &MixtureParams) -> f64 {
    let sqrt_2pi = (2.0 * core::f64::consts::PI).sqrt();
    params
        .weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let n = (i + 1) as f64;
            w * (-r * r / (2.0 * n)).exp() / (sqrt_2pi * n.sqrt())
        })
        .sum()
}

/// Continuum-limit density with its quadrature-computed normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub zeta_v: f64,
    /// Integral of the unnormalized shape over the whole line.
    pub normalization: f64,
}

/// Unnormalized shape `K(zeta+1/2, zeta+3/2, -r^2/2) / (zeta+1/2)`, which
/// equals `(r^2/2)^-a gamma(a, r^2/2)` with `a = zeta + 1/2`.
fn closed_form_shape(r: f64, zeta_v: f64) -> Result<f64, AnalyticError> {
    let a = zeta_v + 0.5;
    let x = r * r / 2.0;
    Ok(kummer_m(a, a + 1.0, -x)? / a)
}

impl ClosedForm {
    pub fn new(zeta_v: f64) -> Result<Self, AnalyticError> {
        if !(zeta_v.is_finite() && zeta_v > 0.0) {
            return Err(AnalyticError::BadZeta(zeta_v));
        }
        let a = zeta_v + 0.5;
        // Beyond R the lower incomplete gamma has saturated at Gamma(a)
        // to machine precision, so the remainder integrates exactly.
        let r_split = 60.0;
        let body = adaptive_simpson(
            &|r: f64| closed_form_shape(r, zeta_v).expect("validated zeta"),
            0.0,
            r_split,
            1e-12,
        );
        let tail = ln_gamma(a).exp() * 2.0f64.powf(a) * r_split.powf(1.0 - 2.0 * a)
            / (2.0 * a - 1.0);
        Ok(ClosedForm {
            zeta_v,
            normalization: 2.0 * (body + tail),
        })
    }

    /// Normalized density at `r`. Even in `r`; finite at the origin
    /// (`1 / (zeta_v + 1/2)` before normalization).
    pub fn density(&self, r: f64) -> f64 {
        closed_form_shape(r, self.zeta_v).expect("validated zeta") / self.normalization
    }
}

/// One-shot evaluation of the continuum density (recomputes the
/// normalization; use [`ClosedForm`] for repeated evaluation).
pub fn closed_form_density(r: f64, zeta_v: f64) -> Result<f64, AnalyticError> {
    Ok(ClosedForm::new(zeta_v)?.density(r))
}

/// Cumulative tail exponent implied by the density tail `r^-(2 zeta_v + 1)`.
pub fn predicted_alpha(zeta_v: f64) -> f64 {
    2.0 * zeta_v
}

/// Maximum relative deviation between the normalized mixture and the
/// normalized continuum density over the grid.
pub fn mixture_vs_closed_form(
    zeta_v: f64,
    n_max: usize,
    r_grid: &[f64],
) -> Result<f64, AnalyticError> {
    if r_grid.is_empty() {
        return Err(AnalyticError::EmptyGrid);
    }
    let params = MixtureParams::new(zeta_v, n_max)?;
    let cf = ClosedForm::new(zeta_v)?;
    let mut max_dev = 0.0f64;
    for &r in r_grid {
        let reference = cf.density(r);
        let dev = (mixture_density(r, &params) - reference).abs() / reference;
        max_dev = max_dev.max(dev);
    }
    Ok(max_dev)
}
