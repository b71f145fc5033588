//! Special functions needed by the analytic return distribution: log-gamma,
//! the regularized lower incomplete gamma, and the Kummer confluent
//! hypergeometric function M(a, b, z) on the parameter range used here.

use super::AnalyticError;

const MAX_ITER: usize = 500;

/// Lanczos log-gamma (g = 7, 9 coefficients), accurate to ~1e-14 for z > 0.
pub fn ln_gamma(z: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if z < 0.5 {
        // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
        let pi = core::f64::consts::PI;
        return (pi / (pi * z).sin()).ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, c) in COEFFS.iter().enumerate() {
        acc += c / (z + (i + 1) as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * core::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
///
/// Series expansion for x < a + 1, Lentz continued fraction for the
/// complement otherwise.
pub fn gamma_p(a: f64, x: f64) -> Result<f64, AnalyticError> {
    if a <= 0.0 || x < 0.0 || !a.is_finite() || !x.is_finite() {
        return Err(AnalyticError::GammaDomain { a, x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let log_prefactor = -x + a * x.ln() - ln_gamma(a);
    let prefactor = log_prefactor.exp();
    if x < a + 1.0 {
        series_p(a, x, prefactor)
    } else {
        Ok(1.0 - cf_q(a, x, prefactor)?)
    }
}

/// P(a, x) by series: prefactor * sum_n x^n / (a (a+1) ... (a+n)).
fn series_p(a: f64, x: f64, prefactor: f64) -> Result<f64, AnalyticError> {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            return Ok(prefactor * sum);
        }
    }
    Err(AnalyticError::NoConvergence("gamma_p series"))
}

/// Q(a, x) by the modified Lentz continued fraction.
fn cf_q(a: f64, x: f64, prefactor: f64) -> Result<f64, AnalyticError> {
    const TINY: f64 = 1e-300;
    let b0 = x + 1.0 - a;
    let mut f = if b0.abs() < TINY { TINY } else { b0 };
    let mut c = f;
    let mut d = 0.0f64;
    for n in 1..=MAX_ITER {
        let nf = n as f64;
        let an = nf * (a - nf);
        let bn = x + 2.0 * nf + 1.0 - a;
        d = bn + an * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = bn + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok(prefactor / f);
        }
    }
    Err(AnalyticError::NoConvergence("gamma_q continued fraction"))
}

/// Raw Kummer series sum_k (a)_k z^k / ((b)_k k!), stable for z >= 0 when
/// a, b > 0 (all terms positive).
fn kummer_series(a: f64, b: f64, z: f64) -> Result<f64, AnalyticError> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 0..2000 {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            return Ok(sum);
        }
    }
    Err(AnalyticError::NoConvergence("kummer series"))
}

/// Crossover between the series and the incomplete-gamma route for
/// negative arguments.
pub(crate) const KUMMER_SERIES_LIMIT: f64 = 30.0;

/// Series branch for z < 0: the Kummer transformation
/// `M(a, b, z) = e^z M(b - a, b, -z)` turns the alternating series into a
/// positive-term one (for b > a), avoiding catastrophic cancellation.
pub(crate) fn kummer_negative_series(a: f64, b: f64, z: f64) -> Result<f64, AnalyticError> {
    Ok(z.exp() * kummer_series(b - a, b, -z)?)
}

/// Incomplete-gamma branch for large negative z, requiring b = a + 1:
/// `M(a, a+1, -x) = a x^-a gamma(a, x)`.
pub(crate) fn kummer_gamma_route(a: f64, b: f64, z: f64) -> Result<f64, AnalyticError> {
    if (b - a - 1.0).abs() > 1e-12 {
        return Err(AnalyticError::UnsupportedKummer { a, b, z });
    }
    let x = -z;
    let p = gamma_p(a, x)?;
    // a * x^-a * P(a, x) * Gamma(a), assembled in logs against overflow.
    Ok(a * p * (ln_gamma(a) - a * x.ln()).exp())
}

/// Kummer confluent hypergeometric function M(a, b, z).
///
/// Route selection: direct series for z >= 0; transformed series for
/// -30 <= z < 0; the incomplete-gamma identity for z < -30 (where only
/// b = a + 1 is supported — the range the return distribution uses).
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<f64, AnalyticError> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(AnalyticError::UnsupportedKummer { a, b, z });
    }
    if b <= 0.0 && (b - b.round()).abs() < 1e-12 {
        return Err(AnalyticError::BadKummerB(b));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z > 0.0 {
        kummer_series(a, b, z)
    } else if -z <= KUMMER_SERIES_LIMIT {
        kummer_negative_series(a, b, z)
    } else {
        kummer_gamma_route(a, b, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::quad::adaptive_simpson;

    #[test]
    fn ln_gamma_reference_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-14);
        assert!((ln_gamma(2.0)).abs() < 1e-14);
        assert!((ln_gamma(0.5) - 0.5 * core::f64::consts::PI.ln()).abs() < 1e-13);
        // Gamma(5) = 24.
        assert!((ln_gamma(5.0) - 24.0f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn gamma_p_special_cases() {
        assert_eq!(gamma_p(2.0, 0.0).unwrap(), 0.0);
        // P(1, x) = 1 - e^-x.
        for x in [0.1, 1.0, 3.0, 20.0] {
            let p = gamma_p(1.0, x).unwrap();
            assert!((p - (1.0 - (-x).exp())).abs() < 1e-13, "x = {x}");
        }
        // P(2, x) = 1 - e^-x (1 + x).
        for x in [0.5, 2.0, 10.0, 50.0] {
            let p = gamma_p(2.0, x).unwrap();
            assert!((p - (1.0 - (-x).exp() * (1.0 + x))).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn gamma_p_matches_quadrature() {
        // Independent oracle: numerical quadrature of t^{a-1} e^{-t}.
        for (a, x) in [(0.7, 0.4), (1.5, 2.0), (2.0, 2.0), (3.5, 7.0), (2.5, 30.0)] {
            let oracle = adaptive_simpson(&|t: f64| t.powf(a - 1.0) * (-t).exp(), 1e-12, x, 1e-13)
                / ln_gamma(a).exp();
            let p = gamma_p(a, x).unwrap();
            assert!(
                (p - oracle).abs() < 1e-8 * oracle.max(1e-10),
                "a={a} x={x}: {p} vs {oracle}"
            );
        }
    }

    #[test]
    fn gamma_p_rejects_bad_domain() {
        assert!(gamma_p(0.0, 1.0).is_err());
        assert!(gamma_p(1.0, -1.0).is_err());
    }

    #[test]
    fn kummer_at_zero_is_one() {
        assert_eq!(kummer_m(2.0, 3.0, 0.0).unwrap(), 1.0);
        assert_eq!(kummer_m(0.3, 1.7, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn kummer_identity_m_1_2() {
        // M(1, 2, z) = (e^z - 1) / z; at z = -1 this is 1 - 1/e.
        let v = kummer_m(1.0, 2.0, -1.0).unwrap();
        let expected = 1.0 - (-1.0f64).exp();
        assert!((v - expected).abs() < 1e-14, "{v} vs {expected}");
        for z in [-25.0, -5.0, 0.5, 3.0] {
            let v = kummer_m(1.0, 2.0, z).unwrap();
            let expected = (z.exp() - 1.0) / z;
            assert!((v - expected).abs() / expected.abs() < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn kummer_identity_m_a_a_is_exp() {
        for a in [0.5, 1.0, 2.5, 4.0] {
            for z in [-20.0, -3.0, -0.1, 1.0, 10.0] {
                let v = kummer_m(a, a, z).unwrap();
                assert!(
                    (v - z.exp()).abs() / z.exp() < 1e-12,
                    "a={a} z={z}: {v} vs {}",
                    z.exp()
                );
            }
        }
    }

    #[test]
    fn kummer_matches_incomplete_gamma_quadrature() {
        // M(a, a+1, -x) = a x^-a gamma(a, x) with gamma by quadrature.
        for (a, r) in [(2.0, 2.0), (1.5, 3.0), (2.5, 1.0)] {
            let x: f64 = r * r / 2.0;
            let quad_gamma =
                adaptive_simpson(&|t: f64| t.powf(a - 1.0) * (-t).exp(), 1e-12, x, 1e-13);
            let expected = a * x.powf(-a) * quad_gamma;
            let v = kummer_m(a, a + 1.0, -x).unwrap();
            assert!(
                (v - expected).abs() / expected < 1e-8,
                "a={a} x={x}: {v} vs {expected}"
            );
        }
    }

    #[test]
    fn kummer_branches_agree_at_crossover() {
        // Series and incomplete-gamma routes evaluated at the same point.
        for a in [1.5, 2.0, 2.5, 3.5] {
            let b = a + 1.0;
            let z = -KUMMER_SERIES_LIMIT;
            let series = kummer_negative_series(a, b, z).unwrap();
            let gamma = kummer_gamma_route(a, b, z).unwrap();
            assert!(
                (series - gamma).abs() / gamma.abs() < 1e-9,
                "a={a}: {series} vs {gamma}"
            );
        }
    }

    #[test]
    fn kummer_deep_negative_arguments() {
        // gamma(a, x) saturates at Gamma(a), so M(a, a+1, -x) -> a Gamma(a) x^-a.
        let a = 2.0;
        let x = 800.0f64;
        let v = kummer_m(a, a + 1.0, -x).unwrap();
        let expected = a * ln_gamma(a).exp() * x.powf(-a);
        assert!((v - expected).abs() / expected < 1e-10, "{v} vs {expected}");
    }

    #[test]
    fn kummer_rejects_non_positive_integer_b() {
        assert!(kummer_m(1.0, 0.0, 1.0).is_err());
        assert!(kummer_m(1.0, -2.0, 1.0).is_err());
        assert!(kummer_m(1.0, -1.5, 0.5).is_ok());
    }

    #[test]
    fn kummer_grid_against_gamma_identity() {
        // Identity suite over an (a, z) grid, max relative error 1e-8.
        for a in [0.6, 1.0, 1.5, 2.0, 3.0] {
            for r in [0.2, 1.0, 2.0, 4.0, 7.0] {
                let x: f64 = r * r / 2.0;
                let lhs = kummer_m(a, a + 1.0, -x).unwrap();
                let rhs = a * x.powf(-a) * gamma_p(a, x).unwrap() * ln_gamma(a).exp();
                assert!(
                    (lhs - rhs).abs() / rhs.abs() < 1e-8,
                    "a={a} x={x}: {lhs} vs {rhs}"
                );
            }
        }
    }
}
