//! Cooperation-level design.
//!
//! The planner may maximize `U = W + gamma pi_S` instead of `W`: positive
//! `gamma` cooperates with the self-interested supplier, negative `gamma`
//! fights it. When both suppliers reason at the same level `k`, a suitable
//! `gamma` moves total production toward `(b - c)/a` and recovers at least
//! the equilibrium welfare.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level_k;
use crate::market::MarketParams;
use crate::welfare;

/// Weight `gamma` on the opponent's profit in the planner's utility.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CooperationLevel(f64);

impl CooperationLevel {
    pub const ZERO: CooperationLevel = CooperationLevel(0.0);

    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() {
            Ok(CooperationLevel(gamma))
        } else {
            Err(Error::InvalidInput(format!(
                "cooperation level must be finite, got {gamma}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for CooperationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Welfare when both suppliers are level `k` and the planner uses `gamma`.
pub fn equal_level_welfare(k: u32, gamma: CooperationLevel, params: &MarketParams) -> f64 {
    params.welfare(&level_k::designed_profile(k, gamma, params))
}

/// `x^p` with `0^p = 0` for `p > 0`, guarding against tiny negative bases
/// produced by rounding at `f = (b - c)/a`.
fn frac_pow(base: f64, exponent: f64) -> f64 {
    if base <= 0.0 {
        0.0
    } else {
        base.powf(exponent)
    }
}

/// Welfare-maximizing cooperation level for equal levels `k >= 1`.
///
/// With `B = (b - c)/a`:
/// even `k`: `2 ((B - f)/(B - f/2))^(2/k) - 1`;
/// odd `k`: `max{-(f/2)/B, 2 ((B - f)/B)^(2/(k+1)) - 1}`.
/// Always lies in `[-1, 1]`.
pub fn optimal_cooperation_level(k: u32, params: &MarketParams) -> Result<CooperationLevel> {
    if k == 0 {
        return Err(Error::InvalidInput("cooperation design needs k >= 1".into()));
    }
    let big_b = params.efficient_total();
    let f = params.f();
    let gamma = if k.is_multiple_of(2) {
        2.0 * frac_pow((big_b - f) / (big_b - f / 2.0), 2.0 / k as f64) - 1.0
    } else {
        let interior = -(f / 2.0) / big_b;
        let kink = 2.0 * frac_pow((big_b - f) / big_b, 2.0 / (k as f64 + 1.0)) - 1.0;
        interior.max(kink)
    };
    CooperationLevel::new(gamma)
}

/// For odd `k`: whether every `gamma <= -1` is also optimal, i.e. fighting
/// harder cannot lose welfare.
///
/// For `k >= 3` this is
/// `((B - f)/(B - f/2))^(2/(k-1)) >= ((B - f)/B)^(2/(k+1))`.
/// At `k = 1` any `gamma <= -1` yields total `B/2 + 3f/4`, which ties the
/// optimum exactly when `2 (B - f)/B - 1 >= -(f/2)/B`, i.e. `f <= 2B/3`.
pub fn has_multiple_optima(k: u32, params: &MarketParams) -> Result<bool> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "multiple-optima condition is stated for odd k, got {k}"
        )));
    }
    let big_b = params.efficient_total();
    let f = params.f();
    if k == 1 {
        let beta = params.beta();
        return Ok(2.0 * (1.0 - beta) - 1.0 >= -beta / 2.0);
    }
    let left = frac_pow((big_b - f) / (big_b - f / 2.0), 2.0 / (k as f64 - 1.0));
    let right = frac_pow((big_b - f) / big_b, 2.0 / (k as f64 + 1.0));
    Ok(left >= right)
}

/// Price of rationality at equal levels `k` with the optimal cooperation
/// level. Never above 1.
pub fn por_with_design(k: u32, params: &MarketParams) -> Result<f64> {
    let gamma = optimal_cooperation_level(k, params)?;
    welfare::ratio(
        welfare::equilibrium_performance(params),
        equal_level_welfare(k, gamma, params),
    )
}
