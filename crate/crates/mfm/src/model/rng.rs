//! Deterministic random number generation for the simulation.
//!
//! The simulation RNG contract: xoshiro256++ (Blackman & Vigna), state
//! initialized from a 64-bit seed by four successive SplitMix64 outputs.
//! Both algorithms are pure integer arithmetic, so streams are identical
//! across platforms. Derived quantities (uniforms, normals, Poisson counts)
//! are built here from `next_u64` with `libm` transcendentals, keeping the
//! whole simulation path bit-reproducible.

/// SplitMix64 finalizer step. Advances `state` and returns the next output.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed for realization `index` from an experiment base seed.
///
/// `seed_i = splitmix64(base XOR (index + 1) * GOLDEN)` where GOLDEN is the
/// SplitMix64 increment. Distinct indices give decorrelated streams even for
/// adjacent base seeds.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut s = base ^ (index.wrapping_add(1)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    splitmix64(&mut s)
}

/// xoshiro256++ generator.
#[derive(Debug, Clone)]
pub struct SimRng {
    s: [u64; 4],
}

impl SimRng {
    /// Seeds the four state words with successive SplitMix64 outputs.
    pub fn seed_from_u64(seed: u64) -> Self {
        let mut sm = seed;
        let s = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        SimRng { s }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[0]
            .wrapping_add(s[3])
            .rotate_left(23)
            .wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform draw on `[0, 1)` from the top 53 bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform draw on `[lo, hi)`.
    #[inline]
    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        // 1 - u1 is in (0, 1], so the log is finite.
        let r = libm::sqrt(-2.0 * libm::log(1.0 - u1));
        r * libm::cos(2.0 * core::f64::consts::PI * u2)
    }

    /// Log-normal draw `exp(mu + sigma * Z)`.
    pub fn lognormal(&mut self, mu: f64, sigma: f64) -> f64 {
        libm::exp(mu + sigma * self.standard_normal())
    }

    /// Poisson count by Knuth's product-of-uniforms method. Intended for
    /// small rates (per-trader unit counts); draws are O(lambda).
    pub fn poisson(&mut self, lambda: f64) -> u64 {
        let l = libm::exp(-lambda);
        let mut k: u64 = 0;
        let mut p = 1.0;
        loop {
            p *= self.uniform();
            if p <= l {
                return k;
            }
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Expected values generated from the reference C implementations
    // (splitmix64 and xoshiro256++ by Blackman & Vigna).
    #[test]
    fn xoshiro_matches_reference_seed0() {
        let mut rng = SimRng::seed_from_u64(0);
        let expected: [u64; 6] = [
            0x53175d61490b23df,
            0x61da6f3dc380d507,
            0x5c0fdf91ec9a7bfc,
            0x02eebf8c3bbe5e1a,
            0x7eca04ebaf4a5eea,
            0x0543c37757f08d9a,
        ];
        for e in expected {
            assert_eq!(rng.next_u64(), e);
        }
    }

    #[test]
    fn xoshiro_matches_reference_seed12345() {
        let mut rng = SimRng::seed_from_u64(12345);
        let expected: [u64; 6] = [
            0x8d948a82def8a568,
            0x3477f953796702a0,
            0x15caa2fce6db8d69,
            0x2cef8853c20c6dd0,
            0x43ff3fff9c039cd9,
            0xb9c18b4a72333287,
        ];
        for e in expected {
            assert_eq!(rng.next_u64(), e);
        }
    }

    #[test]
    fn splitmix_matches_reference() {
        let mut s = 42u64;
        let expected: [u64; 4] = [
            0xbdd732262feb6e95,
            0x28efe333b266f103,
            0x47526757130f9f52,
            0x581ce1ff0e4ae394,
        ];
        for e in expected {
            assert_eq!(splitmix64(&mut s), e);
        }
    }

    #[test]
    fn uniform_matches_reference() {
        let mut rng = SimRng::seed_from_u64(7);
        let expected = [
            0.055360436478333108,
            0.17211585444811772,
            0.71757612835865936,
            0.42720981929150526,
        ];
        for e in expected {
            assert_eq!(rng.uniform(), e);
        }
    }

    #[test]
    fn uniform_stays_in_unit_interval() {
        let mut rng = SimRng::seed_from_u64(99);
        for _ in 0..10_000 {
            let u = rng.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn standard_normal_moments() {
        let mut rng = SimRng::seed_from_u64(2024);
        let n = 200_000;
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..n {
            let z = rng.standard_normal();
            sum += z;
            sum2 += z * z;
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn poisson_mean_matches_rate() {
        let mut rng = SimRng::seed_from_u64(5);
        let n = 100_000;
        let total: u64 = (0..n).map(|_| rng.poisson(1.0)).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let seeds: Vec<u64> = (0..100).map(|i| derive_seed(1, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
    }
}
