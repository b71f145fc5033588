//! Mean-field market model.
//!
//! A market of `N` agents coupled only through the asset price. Each step,
//! every agent decides stochastically whether to trade based on how far the
//! price has drifted from its moving average, and trading agents buy or sell
//! with equal probability. The net demand moves the price multiplicatively.
//!
//! The crate is split into three layers:
//!
//! - [`model`] — the simulation itself: configuration, agent dynamics, the
//!   price process, and deterministic seeded runs.
//! - [`stats`] — observables computed from simulated series: log returns,
//!   rolling volatility, empirical CCDFs, Hill tail-index estimation with
//!   subsample-bootstrap order-statistic selection, autocorrelation,
//!   structure functions, and log-normal volatility fits.
//! - [`analytic`] — the closed-form return distribution implied by a
//!   power-law trader-count distribution: the finite Gaussian mixture, its
//!   continuum limit via the Kummer confluent hypergeometric function, and
//!   the exponent relation `alpha = 2 * zeta_v`.
//!
//! Simulations are bit-reproducible: the generator is xoshiro256++ seeded
//! via SplitMix64, agents are updated in index order, and all transcendental
//! functions in the simulation path use portable `libm` implementations.

pub mod analytic;
pub mod model;
pub mod stats;

pub use model::{
    run_simulation, ModelConfig, ModelError, MuSpec, SimulationSeries, VolumeVariant,
};
pub use stats::{StatsError, TailSign};
