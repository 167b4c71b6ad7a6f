//! Market primitives: inverse demand, payoffs and social welfare.
//!
//! The consumer has quadratic utility `u(q) = -a/2 q^2 + b q + m`, both
//! suppliers have the same linear cost `c q`, and the planner's output is
//! capped by the line capacity `f`. Total demand always equals `q_S + q_B`;
//! it is derived, never stored.

use serde::{Deserialize, Serialize};

use crate::design::CooperationLevel;
use crate::error::{Error, Result};

/// Constants defining one market instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    a: f64,
    b: f64,
    c: f64,
    m: f64,
    f: f64,
}

impl MarketParams {
    /// Validates `a > 0`, `b > 0`, `0 <= c < b`, `m >= 0` and
    /// `0 < f <= (b - c) / a`.
    pub fn new(a: f64, b: f64, c: f64, m: f64, f: f64) -> Result<Self> {
        let all_finite = [a, b, c, m, f].iter().all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidParams("all constants must be finite".into()));
        }
        if a <= 0.0 {
            return Err(Error::InvalidParams(format!("a must be positive, got {a}")));
        }
        if b <= 0.0 {
            return Err(Error::InvalidParams(format!("b must be positive, got {b}")));
        }
        if c < 0.0 || c >= b {
            return Err(Error::InvalidParams(format!("c must lie in [0, b), got c={c}, b={b}")));
        }
        if m < 0.0 {
            return Err(Error::InvalidParams(format!("m must be non-negative, got {m}")));
        }
        let cap = (b - c) / a;
        if f <= 0.0 || f > cap {
            return Err(Error::InvalidParams(format!(
                "f must lie in (0, (b-c)/a] = (0, {cap}], got {f}"
            )));
        }
        Ok(MarketParams { a, b, c, m, f })
    }

    /// `a = b = 1`, `c = 0.25`, `m = 0` with the given line capacity.
    pub fn reference(f: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 0.25, 0.0, f)
    }

    /// Same demand and cost, different line capacity.
    pub fn with_capacity(&self, f: f64) -> Result<Self> {
        Self::new(self.a, self.b, self.c, self.m, f)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Capacity of the line feeding the planner.
    pub fn f(&self) -> f64 {
        self.f
    }

    /// Welfare-optimal total production `(b - c) / a`, at which price equals
    /// marginal cost.
    pub fn efficient_total(&self) -> f64 {
        (self.b - self.c) / self.a
    }

    /// Normalized capacity `beta = f a / (b - c)`, in `(0, 1]`.
    pub fn beta(&self) -> f64 {
        self.f / self.efficient_total()
    }

    /// Global welfare maximum `(b - c)^2 / (2a) + m`.
    pub fn max_welfare(&self) -> f64 {
        (self.b - self.c).powi(2) / (2.0 * self.a) + self.m
    }

    pub fn consumer_utility(&self, q_d: f64) -> f64 {
        -0.5 * self.a * q_d * q_d + self.b * q_d + self.m
    }

    /// `p(q_D) = b - a q_D`. Negative above `b/a`; callers bound quantities.
    pub fn inverse_demand(&self, q_d: f64) -> f64 {
        self.b - self.a * q_d
    }

    /// Social welfare `u(q_D) - c q_D`, which is also the planner's payoff.
    pub fn welfare(&self, profile: &StrategyProfile) -> f64 {
        let q_d = profile.total();
        self.consumer_utility(q_d) - self.c * q_d
    }

    /// Profit of the self-interested supplier, `(p(q_D) - c) q_S`.
    pub fn profit_self(&self, profile: &StrategyProfile) -> f64 {
        (self.inverse_demand(profile.total()) - self.c) * profile.self_interested
    }

    /// Consumer net benefit `u(q_D) - p q_D`.
    pub fn consumer_surplus(&self, profile: &StrategyProfile) -> f64 {
        let q_d = profile.total();
        self.consumer_utility(q_d) - self.inverse_demand(q_d) * q_d
    }

    /// `|(b - c)/a - q_S - q_B|`. Welfare equals
    /// `-(a/2) d^2 + (b - c)^2/(2a) + m`, so it is strictly decreasing in `d`.
    pub fn welfare_distance(&self, profile: &StrategyProfile) -> f64 {
        (self.efficient_total() - profile.total()).abs()
    }

    /// Welfare recovered from a distance value.
    pub fn welfare_from_distance(&self, d: f64) -> f64 {
        -0.5 * self.a * d * d + self.max_welfare()
    }

    /// Planner's designed utility `W + gamma * pi_S`.
    pub fn designed_utility(&self, profile: &StrategyProfile, gamma: CooperationLevel) -> f64 {
        self.welfare(profile) + gamma.value() * self.profit_self(profile)
    }
}

/// Quantities chosen by the two suppliers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    /// `q_S`, output of the self-interested supplier.
    pub self_interested: f64,
    /// `q_B`, output of the planner.
    pub planner: f64,
}

impl StrategyProfile {
    pub fn new(self_interested: f64, planner: f64) -> Self {
        StrategyProfile {
            self_interested,
            planner,
        }
    }

    /// Checked constructor enforcing `q_S >= 0` and `0 <= q_B <= f`.
    pub fn feasible(self_interested: f64, planner: f64, params: &MarketParams) -> Result<Self> {
        let profile = Self::new(self_interested, planner);
        if profile.is_feasible(params) {
            Ok(profile)
        } else {
            Err(Error::InvalidInput(format!(
                "infeasible profile (q_S={self_interested}, q_B={planner}) for f={}",
                params.f()
            )))
        }
    }

    /// Market-clearing demand `q_S + q_B`.
    pub fn total(&self) -> f64 {
        self.self_interested + self.planner
    }

    pub fn is_feasible(&self, params: &MarketParams) -> bool {
        self.self_interested >= 0.0 && self.planner >= 0.0 && self.planner <= params.f()
    }
}
