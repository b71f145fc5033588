// temp calibration of plateau spread values
use mfm::model::rng::SimRng;
use mfm::stats::{optimal_k, BootstrapConfig, TailSign};

fn main() {
    let bs = BootstrapConfig::default();
    for (name, seed, gen) in [
        ("pareto3", 23u64, 0u8),
        ("exponential", 29, 3),
        ("gaussian-abs", 31, 4),
        ("lognormal", 33, 5),
    ] {
        let mut rng = SimRng::seed_from_u64(seed);
        let samples: Vec<f64> = (0..100_000)
            .map(|_| {
                let u = 1.0 - rng.uniform();
                match gen {
                    0 => u.powf(-1.0 / 3.0),
                    3 => -u.ln(),
                    4 => rng.standard_normal().abs(),
                    _ => rng.lognormal(0.0, 1.0),
                }
            })
            .collect();
        let est = optimal_k(&samples, TailSign::Positive, &bs).unwrap();
        println!(
            "{name:>14}: alpha={:.3} k={} drift={:.4} absent={}",
            est.alpha, est.k, est.plateau_drift, est.plateau_absent
        );
        let gs: Vec<String> = est.k_diagnostics.iter().map(|(k, g)| format!("{k}:{g:.3}")).collect();
        println!("   {}", gs.join(" "));
    }
}
