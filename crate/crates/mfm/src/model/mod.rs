//! Agent decision dynamics, the price process, and the simulation loop.
//!
//! Each of `N` agents is in one of three states per step: buying, selling,
//! or inactive. An agent trades with probability
//! `exp(-mu_i * |ln(p_t / <p_t>_tau)|)` where `<p_t>_tau` is the moving
//! average of the price over the last `tau` steps, and a trading agent buys
//! or sells with probability 1/2 each. The price then moves by the factor
//! `(1 + M_t) / (1 - M_t)` where `M_t = (buyers - sellers) / N`.
//!
//! Draw order (fixed, part of the reproducibility contract): agents are
//! visited in index order; each agent consumes one uniform for the
//! trade/no-trade decision and, only when trading, a second uniform for
//! buy/sell (`u < 0.5` means buy). Variant draws are documented on
//! [`MarketState::step`].

pub mod rng;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use rng::SimRng;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("n_agents must be at least 2, got {0}")]
    TooFewAgents(usize),
    #[error("tau must be at least 1")]
    ZeroTau,
    #[error("p0 must be positive and finite, got {0}")]
    BadInitialPrice(f64),
    #[error("homogeneous mu must be non-negative and finite, got {0}")]
    BadMu(f64),
    #[error("uniform mu range requires 0 <= lo < hi, got [{lo}, {hi}]")]
    BadMuRange { lo: f64, hi: f64 },
    #[error("poisson lambda must be positive and finite, got {0}")]
    BadLambda(f64),
    #[error("lognormal n override requires sigma_ln > 0, got {0}")]
    BadLogNormalSigma(f64),
    #[error("price and fundamental must be positive, got p={price}, p*={fundamental}")]
    NonPositivePrice { price: f64, fundamental: f64 },
    #[error("price history is empty")]
    EmptyHistory,
}

/// Agent sensitivity specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MuSpec {
    /// Every agent shares the same sensitivity.
    Homogeneous(f64),
    /// Sensitivities drawn i.i.d. uniform on `[lo, hi)`.
    UniformHeterogeneous { lo: f64, hi: f64 },
}

impl MuSpec {
    pub fn validate(&self) -> Result<(), ModelError> {
        match *self {
            MuSpec::Homogeneous(mu) => {
                if !(mu.is_finite() && mu >= 0.0) {
                    return Err(ModelError::BadMu(mu));
                }
            }
            MuSpec::UniformHeterogeneous { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) {
                    return Err(ModelError::BadMuRange { lo, hi });
                }
            }
        }
        Ok(())
    }
}

/// Per-trader trade size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VolumeVariant {
    /// Every trading agent trades one unit; volume equals the trader count.
    Unit,
    /// Every trading agent draws its size from Poisson(lambda).
    Poisson { lambda: f64 },
}

/// Diagnostic variant: impose the trader-count distribution instead of
/// generating it from the price deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormalNOverride {
    pub mu_ln: f64,
    pub sigma_ln: f64,
}

/// All simulation parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Number of agents N.
    pub n_agents: usize,
    /// Sensitivity specification.
    pub mu_spec: MuSpec,
    /// Moving-average window length tau, in steps.
    pub tau: usize,
    /// Initial price.
    pub p0: f64,
    /// Number of steps T.
    pub t_steps: usize,
    /// RNG seed.
    pub seed: u64,
    /// Per-trader trade size.
    pub volume_variant: VolumeVariant,
    /// Optional imposed trader-count distribution.
    pub n_override: Option<LogNormalNOverride>,
}

impl ModelConfig {
    /// A baseline configuration; callers override fields as needed.
    pub fn new(n_agents: usize, mu_spec: MuSpec, t_steps: usize, seed: u64) -> Self {
        ModelConfig {
            n_agents,
            mu_spec,
            tau: 10_000,
            p0: 1.0,
            t_steps,
            seed,
            volume_variant: VolumeVariant::Unit,
            n_override: None,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n_agents < 2 {
            return Err(ModelError::TooFewAgents(self.n_agents));
        }
        if self.tau == 0 {
            return Err(ModelError::ZeroTau);
        }
        if !(self.p0.is_finite() && self.p0 > 0.0) {
            return Err(ModelError::BadInitialPrice(self.p0));
        }
        self.mu_spec.validate()?;
        if let VolumeVariant::Poisson { lambda } = self.volume_variant {
            if !(lambda.is_finite() && lambda > 0.0) {
                return Err(ModelError::BadLambda(lambda));
            }
        }
        if let Some(ov) = self.n_override {
            if !(ov.sigma_ln.is_finite() && ov.sigma_ln > 0.0) {
                return Err(ModelError::BadLogNormalSigma(ov.sigma_ln));
            }
        }
        Ok(())
    }
}

/// Samples the per-agent sensitivity vector.
pub fn sample_sensitivities(
    mu_spec: &MuSpec,
    n_agents: usize,
    rng: &mut SimRng,
) -> Result<Vec<f64>, ModelError> {
    mu_spec.validate()?;
    Ok(match *mu_spec {
        MuSpec::Homogeneous(mu) => vec![mu; n_agents],
        MuSpec::UniformHeterogeneous { lo, hi } => {
            (0..n_agents).map(|_| rng.uniform_range(lo, hi)).collect()
        }
    })
}

/// Probability that an agent with sensitivity `mu` trades:
/// `exp(-mu * |ln(price / fundamental)|)`.
pub fn trade_probability(price: f64, fundamental: f64, mu: f64) -> Result<f64, ModelError> {
    if !(price > 0.0 && price.is_finite() && fundamental > 0.0 && fundamental.is_finite()) {
        return Err(ModelError::NonPositivePrice { price, fundamental });
    }
    if mu < 0.0 || !mu.is_finite() {
        return Err(ModelError::BadMu(mu));
    }
    let dev = libm::fabs(libm::log(price / fundamental));
    Ok(libm::exp(-mu * dev))
}

/// Arithmetic mean of the stored price history.
pub fn fundamental_value(history: &[f64]) -> Result<f64, ModelError> {
    if history.is_empty() {
        return Err(ModelError::EmptyHistory);
    }
    Ok(history.iter().sum::<f64>() / history.len() as f64)
}

/// Outcome of one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// Price after the step, p_{t+1}.
    pub price: f64,
    /// Net demand M_t = (buyers - sellers) / N, before any clamping.
    pub m: f64,
    /// Number of trading agents n_t.
    pub n_traders: u32,
    /// Traded volume V_t; equals `n_traders` under the Unit variant.
    pub volume: u64,
}

/// Evolving market state.
#[derive(Debug, Clone)]
pub struct MarketState {
    /// Per-agent sensitivities.
    mu: Vec<f64>,
    /// Shared sensitivity when the spec is homogeneous (trade probability
    /// is then computed once per step instead of once per agent).
    shared_mu: Option<f64>,
    /// Current price p_t.
    price: f64,
    /// Last `min(t+1, tau)` prices, most recent at the back.
    history: VecDeque<f64>,
    history_sum: f64,
    tau: usize,
    t: usize,
}

impl MarketState {
    /// Initial state: price `p0`, history `[p0]`, sensitivities sampled
    /// from the config (consuming `n_agents` uniforms when heterogeneous).
    pub fn new(config: &ModelConfig, rng: &mut SimRng) -> Result<Self, ModelError> {
        config.validate()?;
        let mu = sample_sensitivities(&config.mu_spec, config.n_agents, rng)?;
        let shared_mu = match config.mu_spec {
            MuSpec::Homogeneous(m) => Some(m),
            MuSpec::UniformHeterogeneous { .. } => None,
        };
        let mut history = VecDeque::with_capacity(config.tau + 1);
        history.push_back(config.p0);
        Ok(MarketState {
            mu,
            shared_mu,
            price: config.p0,
            history,
            history_sum: config.p0,
            tau: config.tau,
            t: 0,
        })
    }

    pub fn price(&self) -> f64 {
        self.price
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn sensitivities(&self) -> &[f64] {
        &self.mu
    }

    /// Moving average of the stored history, `<p_t>_tau`. During warm-up
    /// (t < tau) this is a growing-window average over all prices so far.
    pub fn fundamental(&self) -> f64 {
        self.history_sum / self.history.len() as f64
    }

    fn push_price(&mut self, price: f64) {
        self.history.push_back(price);
        self.history_sum += price;
        if self.history.len() > self.tau {
            let evicted = self.history.pop_front().expect("history non-empty");
            self.history_sum -= evicted;
        }
    }

    /// Advances the state by one step.
    ///
    /// Draw order per agent (index order): one uniform `u1` for the trade
    /// decision (`u1 < exp(-mu_i * dev)` trades), then for traders one
    /// uniform `u2` for direction (`u2 < 0.5` buys). Under the Poisson
    /// volume variant each trader draws its size immediately after its
    /// direction draw. Under `n_override` the step instead consumes two
    /// uniforms for one log-normal draw of `n_t` (rounded, truncated to
    /// `[1, N]`) followed by `n_t` direction draws; which agents trade is
    /// unobservable (agents are exchangeable within a step), so no
    /// selection draws are consumed.
    ///
    /// When `|M_t| = 1` the demand is clamped to `±(1 - 1/N)` inside the
    /// price map; the record keeps the raw `M_t`.
    pub fn step(
        &mut self,
        volume_variant: VolumeVariant,
        n_override: Option<LogNormalNOverride>,
        rng: &mut SimRng,
    ) -> StepRecord {
        let n = self.mu.len();
        let fundamental = self.fundamental();
        let dev = libm::fabs(libm::log(self.price / fundamental));

        let mut buyers: u64 = 0;
        let mut sellers: u64 = 0;
        let mut volume: u64 = 0;

        let trade_draw = |rng: &mut SimRng, buyers: &mut u64, sellers: &mut u64| {
            if rng.uniform() < 0.5 {
                *buyers += 1;
            } else {
                *sellers += 1;
            }
            if let VolumeVariant::Poisson { lambda } = volume_variant {
                rng.poisson(lambda)
            } else {
                1
            }
        };

        if let Some(ov) = n_override {
            let raw = rng.lognormal(ov.mu_ln, ov.sigma_ln);
            let n_traders = libm::round(raw).clamp(1.0, n as f64) as u64;
            for _ in 0..n_traders {
                volume += trade_draw(rng, &mut buyers, &mut sellers);
            }
        } else if let Some(mu) = self.shared_mu {
            let p = if mu * dev == 0.0 {
                1.0
            } else {
                libm::exp(-mu * dev)
            };
            for _ in 0..n {
                if rng.uniform() < p {
                    volume += trade_draw(rng, &mut buyers, &mut sellers);
                }
            }
        } else {
            for &mu in &self.mu {
                let p = if mu * dev == 0.0 {
                    1.0
                } else {
                    libm::exp(-mu * dev)
                };
                if rng.uniform() < p {
                    volume += trade_draw(rng, &mut buyers, &mut sellers);
                }
            }
        }

        let n_traders = buyers + sellers;
        let m = (buyers as f64 - sellers as f64) / n as f64;
        let m_max = 1.0 - 1.0 / n as f64;
        let m_clamped = m.clamp(-m_max, m_max);
        let new_price = self.price * (1.0 + m_clamped) / (1.0 - m_clamped);

        self.price = new_price;
        self.push_price(new_price);
        self.t += 1;

        StepRecord {
            price: new_price,
            m,
            n_traders: n_traders as u32,
            volume,
        }
    }
}

/// Aligned time series produced by a run. All arrays have length
/// `t_steps + 1`; index 0 holds the initial state (`m = 0`, `n_traders = 0`)
/// and index `t + 1` holds the `M_t` and `n_t` that produced `p_{t+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSeries {
    pub config: ModelConfig,
    pub price: Vec<f64>,
    pub m: Vec<f64>,
    pub n_traders: Vec<u32>,
    pub volume: Vec<u64>,
}

impl SimulationSeries {
    pub fn len(&self) -> usize {
        self.price.len()
    }

    pub fn is_empty(&self) -> bool {
        self.price.is_empty()
    }

    /// Moving average of the price at index `t`, recomputed with the same
    /// growing-window-then-`tau` convention the simulation used.
    pub fn fundamental_at(&self, t: usize) -> f64 {
        let tau = self.config.tau;
        let start = (t + 1).saturating_sub(tau);
        let window = &self.price[start..=t];
        window.iter().sum::<f64>() / window.len() as f64
    }
}

/// Runs the full simulation. Deterministic given the config (including its
/// seed): same bytes out on every run and platform.
pub fn run_simulation(config: &ModelConfig) -> Result<SimulationSeries, ModelError> {
    config.validate()?;
    let mut rng = SimRng::seed_from_u64(config.seed);
    let mut state = MarketState::new(config, &mut rng)?;

    let len = config.t_steps + 1;
    let mut price = Vec::with_capacity(len);
    let mut m = Vec::with_capacity(len);
    let mut n_traders = Vec::with_capacity(len);
    let mut volume = Vec::with_capacity(len);

    price.push(config.p0);
    m.push(0.0);
    n_traders.push(0u32);
    volume.push(0u64);

    for _ in 0..config.t_steps {
        let rec = state.step(config.volume_variant, config.n_override, &mut rng);
        price.push(rec.price);
        m.push(rec.m);
        n_traders.push(rec.n_traders);
        volume.push(rec.volume);
    }

    Ok(SimulationSeries {
        config: config.clone(),
        price,
        m,
        n_traders,
        volume,
    })
}
