// Scratch probe: paper-scale exponents and timing. Deleted before release.
use std::time::Instant;

use mfm::model::{run_simulation, ModelConfig, MuSpec};
use mfm::stats::{self, BootstrapConfig, TailSign};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).map(String::as_str).unwrap_or("het");

    let (n, t, mu): (usize, usize, MuSpec) = match mode {
        "het" => (
            10_000,
            200_000,
            MuSpec::UniformHeterogeneous { lo: 10.0, hi: 200.0 },
        ),
        "hom" => (20_000, 200_000, MuSpec::Homogeneous(100.0)),
        "mu5" => (10_000, 200_000, MuSpec::Homogeneous(5.0)),
        _ => panic!("unknown mode"),
    };

    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let cfg = ModelConfig::new(n, mu, t, seed);
    let start = Instant::now();
    let series = run_simulation(&cfg).unwrap();
    let sim_time = start.elapsed();
    println!("sim: {:?} ({} agents x {} steps)", sim_time, n, t);

    let w = cfg.tau;
    let prices = &series.price[w..];
    let returns = stats::log_returns(prices, 1).unwrap();
    let norm = stats::normalize(&returns).unwrap();

    let start = Instant::now();
    let bs = BootstrapConfig::default();
    let pos = stats::optimal_k(&norm.values, TailSign::Positive, &bs).unwrap();
    let neg = stats::optimal_k(&norm.values, TailSign::Negative, &bs).unwrap();
    let vols: Vec<f64> = series.n_traders[w + 1..].iter().map(|&v| v as f64).collect();
    let vol = stats::optimal_k(&vols, TailSign::Positive, &bs).unwrap();
    println!("tail estimation: {:?}", start.elapsed());

    println!(
        "alpha_pos = {:.3} (k={}, drift={:.3}, absent={})",
        pos.alpha, pos.k, pos.plateau_drift, pos.plateau_absent
    );
    println!(
        "alpha_neg = {:.3} (k={}, drift={:.3}, absent={})",
        neg.alpha, neg.k, neg.plateau_drift, neg.plateau_absent
    );
    println!(
        "zeta_v    = {:.3} (k={}, drift={:.3}, absent={})",
        vol.alpha, vol.k, vol.plateau_drift, vol.plateau_absent
    );

    let regime = stats::classify_tail_regime(&norm.values, TailSign::Positive).unwrap();
    println!("regime: {:?} (llr = {:.1})", regime.regime, regime.ll_power_law - regime.ll_exponential);

    // ACF behavior (criterion 6 regime)
    let acf_r = stats::autocorrelation(&norm.values, 100).unwrap();
    let abs_r: Vec<f64> = norm.values.iter().map(|v| v.abs()).collect();
    let acf_abs = stats::autocorrelation(&abs_r, 100).unwrap();
    let inside = acf_r.acf.iter().filter(|a| a.abs() < acf_r.noise_band).count();
    let above = acf_abs.acf.iter().filter(|a| **a > acf_abs.noise_band).count();
    println!(
        "acf: r inside band {}/100, |r| above band {}/100 (band {:.4}); acf_abs[99] = {:.4}",
        inside, above, acf_r.noise_band, acf_abs.acf[99]
    );

    // multifractal (criterion 7 regime)
    let ds: Vec<usize> = vec![10, 16, 25, 40, 63, 100, 158, 251, 398, 631, 1000];
    let spec = stats::structure_functions(prices, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], &ds).unwrap();
    let (nl, nl_se) = spec.nonlinearity().unwrap();
    println!(
        "zeta_q: {:?}",
        spec.zeta.iter().map(|z| (z * 1000.0).round() / 1000.0).collect::<Vec<_>>()
    );
    println!("nonlinearity zeta_4 - 2 zeta_2 = {:.4} +- {:.4} (2se)", nl, 2.0 * nl_se);

    // volatility lognormal fit (fig 3a inset regime)
    let vol_series = stats::rolling_volatility(&norm.values, 100).unwrap();
    let pos_vols: Vec<f64> = vol_series.iter().copied().filter(|&v| v > 0.0).collect();
    let ln_fit = stats::lognormal_fit(&pos_vols).unwrap();
    println!(
        "vol lognormal: mu={:.3} sigma={:.3} ks={:.4}",
        ln_fit.mu_ln, ln_fit.sigma_ln, ln_fit.ks_distance
    );

    // participation summary
    let mean_n: f64 = vols.iter().sum::<f64>() / vols.len() as f64;
    let max_n = vols.iter().cloned().fold(0.0f64, f64::max);
    println!("n_t: mean {:.1}, max {:.0}, N {}", mean_n, max_n, n);

    println!("volume gamma_k curve (k, gamma, 1/gamma):");
    for (k, g) in &vol.k_diagnostics {
        println!("  {:>6} {:.4} {:.3}", k, g, 1.0 / g);
    }

    // top-of-distribution structure
    let mut sorted = vols.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    println!("top order stats: {:?}", &sorted[..12]);
    for q in [0.001, 0.01, 0.05, 0.1, 0.25, 0.5] {
        let idx = (q * sorted.len() as f64) as usize;
        println!("  top {:>6}: n_t >= {}", q, sorted[idx]);
    }
    // counts near N
    let near_n = sorted.iter().filter(|&&v| v > 0.8 * n as f64).count();
    println!("samples with n_t > 0.8N: {}", near_n);

    // ccdf log-log slope over mid-range [50, 2000]
    let c = stats::ccdf(&vols).unwrap();
    let pts: Vec<(f64, f64)> = c.xs.iter().zip(&c.ps).filter(|(&x, _)| x >= 50.0 && x <= 2000.0)
        .map(|(&x, &p)| (x.ln(), p.ln())).collect();
    let nn = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nn;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nn;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    println!("volume ccdf slope on [50, 2000]: {:.3}", sxy / sxx);
}
