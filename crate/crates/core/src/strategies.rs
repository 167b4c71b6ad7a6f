//! Planner strategies under complete, probabilistic and no information
//! about the self-interested supplier's level, and the welfare value of
//! that information.

use serde::Serialize;
use statrs::distribution::{Discrete, Poisson};

use crate::error::{Error, Result};
use crate::level_k::{self, Firm};
use crate::market::{MarketParams, StrategyProfile};

const MASS_TOL: f64 = 1e-12;

pub const DEFAULT_POISSON_MEAN: f64 = 1.5;
pub const DEFAULT_MAX_LEVEL: u32 = 20;

/// Probability mass over the self-interested supplier's level `K`.
/// Levels are distinct and sorted; masses sum to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalityDistribution {
    masses: Vec<(u32, f64)>,
}

impl RationalityDistribution {
    /// Explicit `(level, probability)` pairs. Order does not matter;
    /// duplicates, negative masses and totals off by more than `1e-12` are
    /// rejected.
    pub fn explicit(mut masses: Vec<(u32, f64)>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidInput("distribution needs at least one level".into()));
        }
        if let Some(&(k, p)) = masses.iter().find(|(_, p)| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidInput(format!(
                "mass at level {k} must be finite and >= 0, got {p}"
            )));
        }
        masses.sort_by_key(|&(k, _)| k);
        if let Some(w) = masses.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput(format!("level {} listed twice", w[0].0)));
        }
        let total: f64 = masses.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidInput(format!("masses sum to {total}, expected 1")));
        }
        Ok(RationalityDistribution { masses })
    }

    /// Non-negative weights, renormalized to sum to one.
    pub fn from_weights(weights: Vec<(u32, f64)>) -> Result<Self> {
        let total: f64 = weights.iter().map(|(_, w)| w).sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidInput(format!(
                "weights must have a positive finite sum, got {total}"
            )));
        }
        Self::explicit(weights.into_iter().map(|(k, w)| (k, w / total)).collect())
    }

    /// All mass on one level.
    pub fn degenerate(k: u32) -> Self {
        RationalityDistribution { masses: vec![(k, 1.0)] }
    }

    /// Poisson(`mean`) restricted to `0..=max_level` and renormalized.
    pub fn truncated_poisson(mean: f64, max_level: u32) -> Result<Self> {
        let poisson = Poisson::new(mean).map_err(|e| Error::InvalidInput(format!("Poisson mean {mean}: {e}")))?;
        Self::from_weights((0..=max_level).map(|k| (k, poisson.pmf(k as u64))).collect())
    }

    pub fn masses(&self) -> &[(u32, f64)] {
        &self.masses
    }

    pub fn expectation<F: Fn(u32) -> f64>(&self, f: F) -> f64 {
        self.masses.iter().map(|&(k, p)| p * f(k)).sum()
    }
}

/// With the opponent's level `k` known, be exactly one level ahead.
pub fn optimal_strategy(k: u32, params: &MarketParams) -> f64 {
    level_k::closed_form(k.saturating_add(1), Firm::Planner, params)
}

/// Quantity maximizing expected welfare: `min{(b - c)/a - E[q_S^(K)], f}`.
pub fn stochastic_strategy(dist: &RationalityDistribution, params: &MarketParams) -> f64 {
    let mean_s = dist.expectation(|k| level_k::closed_form(k, Firm::SelfInterested, params));
    (params.efficient_total() - mean_s).min(params.f())
}

/// Maximin quantity over all opponent levels: `min{(b - c)/2a + f/4, f}`,
/// which is the planner's own level-2 behavior.
pub fn robust_strategy(params: &MarketParams) -> f64 {
    (params.efficient_total() / 2.0 + params.f() / 4.0).min(params.f())
}

/// `E[W(q_S^(K), q_b)]`.
pub fn expected_welfare(dist: &RationalityDistribution, q_b: f64, params: &MarketParams) -> f64 {
    dist.expectation(|k| {
        let q_s = level_k::closed_form(k, Firm::SelfInterested, params);
        params.welfare(&StrategyProfile::new(q_s, q_b))
    })
}

/// Value of complete information: welfare lost by playing `q_b` instead of
/// the optimal strategy against a level-`k` opponent.
pub fn vci(k: u32, q_b: f64, params: &MarketParams) -> f64 {
    let q_s = level_k::closed_form(k, Firm::SelfInterested, params);
    let best = params.welfare(&StrategyProfile::new(q_s, optimal_strategy(k, params)));
    best - params.welfare(&StrategyProfile::new(q_s, q_b))
}

/// Expected value of incomplete information: how much expected welfare the
/// stochastic strategy gains over the robust one.
pub fn evii(dist: &RationalityDistribution, params: &MarketParams) -> f64 {
    expected_welfare(dist, stochastic_strategy(dist, params), params)
        - expected_welfare(dist, robust_strategy(params), params)
}
