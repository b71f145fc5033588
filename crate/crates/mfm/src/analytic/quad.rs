//! Adaptive Simpson quadrature.

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomial_exactly() {
        // Simpson is exact on cubics.
        let v = adaptive_simpson(&|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-12);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn integrates_gaussian() {
        let v = adaptive_simpson(
            &|x: f64| (-x * x / 2.0).exp() / (2.0 * core::f64::consts::PI).sqrt(),
            -8.0,
            8.0,
            1e-12,
        );
        assert!((v - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn integrates_oscillatory() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, core::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
    }
}
