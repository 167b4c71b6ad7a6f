//! Closed-form best responses.
//!
//! Both payoffs are strictly concave in the responder's own quantity, so each
//! map returns the unique maximizer: the first-order point clipped to the
//! feasible interval.

use crate::design::CooperationLevel;
use crate::market::MarketParams;

/// Profit-maximizing response of the self-interested supplier to `q_b`:
/// `max{(b - c - a q_B) / 2a, 0}`.
pub fn self_interested(q_b: f64, params: &MarketParams) -> f64 {
    ((params.b() - params.c() - params.a() * q_b) / (2.0 * params.a())).max(0.0)
}

/// Welfare-maximizing response of the planner to `q_s`, on `[0, f]`.
pub fn planner(q_s: f64, params: &MarketParams) -> f64 {
    (params.efficient_total() - q_s).min(params.f()).max(0.0)
}

/// Planner response under the designed utility `W + gamma pi_S`:
/// `max{min{(b - c)/a - (1 + gamma) q_S, f}, 0}`.
pub fn planner_designed(q_s: f64, gamma: CooperationLevel, params: &MarketParams) -> f64 {
    (params.efficient_total() - (1.0 + gamma.value()) * q_s)
        .min(params.f())
        .max(0.0)
}
