//! Level-k and equilibrium welfare, price of rationality, and the capacity
//! ranges in which bounded-rational play beats the Nash outcome.
//!
//! All region statements are in terms of the normalized capacity
//! `beta = f a / (b - c)`. Ratio statements assume `m = 0`; a positive `m`
//! shifts numerator and denominator alike and is accepted but not covered by
//! the region results.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::level_k::{self, LevelSpec};
use crate::market::MarketParams;

const ZERO_WELFARE_TOL: f64 = 1e-12;

/// Welfare `W(q_S^(k), q_B^(k+delta))`.
pub fn level_k_performance(spec: &LevelSpec, params: &MarketParams) -> f64 {
    params.welfare(&spec.profile(params))
}

/// Welfare at the Nash equilibrium.
pub fn equilibrium_performance(params: &MarketParams) -> f64 {
    params.welfare(&level_k::nash_equilibrium(params))
}

/// `W_NE / W(q_S^(k), q_B^(k+delta))`. Above 1 means level-k play loses
/// welfare relative to equilibrium.
pub fn price_of_rationality(spec: &LevelSpec, params: &MarketParams) -> Result<f64> {
    ratio(equilibrium_performance(params), level_k_performance(spec, params))
}

pub(crate) fn ratio(numerator: f64, denominator: f64) -> Result<f64> {
    if denominator.abs() <= ZERO_WELFARE_TOL {
        return Err(Error::ZeroWelfare);
    }
    Ok(numerator / denominator)
}

/// Open interval of `beta` on which the price of rationality is strictly
/// below 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PorRegion {
    pub lower: f64,
    pub upper: f64,
    /// Set when the interval has collapsed in floating point (very large `k`).
    pub empty: bool,
}

impl PorRegion {
    fn new(lower: f64, upper: f64) -> Self {
        PorRegion {
            lower,
            upper,
            empty: lower >= upper,
        }
    }

    /// Strict membership.
    pub fn contains(&self, beta: f64) -> bool {
        !self.empty && self.lower < beta && beta < self.upper
    }
}

/// Capacity range in which `PoR(k, k + delta) < 1`, for `delta >= 0` and
/// `k + delta > 0`. Lower planner levels never beat the equilibrium.
///
/// For even `k` with `s = 2^(k/2)`: lower bound `1 - 1/s`, upper bound `1`
/// for `delta` in {0, 1} and `1 - 1/(3s)` otherwise. For odd `k` with
/// `s = 2^((k+1)/2)`: lower bound `1 - 1/(s - 1)`; upper bound
/// `1 - 1/(s + 1)` for `delta = 0`, `1` for `delta` in {1, 2} and
/// `1 - 1/(3s - 1)` otherwise.
pub fn por_lt_one_region(k: u32, delta: i64) -> Result<PorRegion> {
    if delta < 0 {
        return Err(Error::InvalidInput(format!(
            "delta={delta} < 0: the planner is less rational and PoR >= 1 throughout"
        )));
    }
    if k == 0 && delta == 0 {
        return Err(Error::InvalidInput("k + delta must be positive".into()));
    }
    let region = if k.is_multiple_of(2) {
        let s = 2.0_f64.powi((k / 2) as i32);
        let lower = 1.0 - 1.0 / s;
        let upper = if delta <= 1 { 1.0 } else { 1.0 - 1.0 / (3.0 * s) };
        PorRegion::new(lower, upper)
    } else {
        let s = 2.0_f64.powi(k.div_ceil(2) as i32);
        let lower = 1.0 - 1.0 / (s - 1.0);
        let upper = match delta {
            0 => 1.0 - 1.0 / (s + 1.0),
            1 | 2 => 1.0,
            _ => 1.0 - 1.0 / (3.0 * s - 1.0),
        };
        PorRegion::new(lower, upper)
    };
    Ok(region)
}

/// A linear function of `beta`, in units of `(b - c)/a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaLine {
    pub intercept: f64,
    pub slope: f64,
}

impl BetaLine {
    pub fn at(&self, beta: f64) -> f64 {
        self.intercept + self.slope * beta
    }
}

/// Total production `q_S^(k) + q_B^(k+delta)` as a piecewise-linear
/// function of `beta`, for even `k` and `delta >= 2`.
///
/// On `beta <= t_zy` the total equals the Nash total `z`; on
/// `t_zy <= beta <= t_xy` it follows `y` (planner capped at `f`); above
/// `t_xy` it follows `x` (planner uncapped).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductionBreakpoints {
    pub t_zy: f64,
    pub t_xy: f64,
    pub z: BetaLine,
    pub y: BetaLine,
    pub x: BetaLine,
    /// `(b - c)/a`, the unit of the three lines.
    pub unit: f64,
}

impl ProductionBreakpoints {
    /// Total production (in quantity units) at normalized capacity `beta`.
    pub fn total_at(&self, beta: f64) -> f64 {
        let line = if beta <= self.t_zy {
            self.z
        } else if beta <= self.t_xy {
            self.y
        } else {
            self.x
        };
        line.at(beta) * self.unit
    }
}

/// Breakpoints of the level-k total production in `beta`.
///
/// With `n = (k + delta)/2` for even `delta` the upper breakpoint is
/// `t_xy = 1 - 1/(2^(n+1) - 1)`. For odd `delta` the planner level is odd,
/// its uncapped quantity `(1 - 2^-m)(b-c)/a` with `m = (k + delta + 1)/2` no
/// longer depends on `beta`, and `t_xy = 1 - 2^-m`.
pub fn total_production_breakpoints(k: u32, delta: i64, params: &MarketParams) -> Result<ProductionBreakpoints> {
    if !k.is_multiple_of(2) || delta < 2 {
        return Err(Error::InvalidInput(format!(
            "breakpoint analysis needs even k and delta >= 2, got k={k}, delta={delta}"
        )));
    }
    let planner_level = k as i64 + delta;
    if planner_level > level_k::MAX_EXACT_LEVEL as i64 {
        return Err(Error::InvalidInput(format!(
            "planner level {planner_level} exceeds {}",
            level_k::MAX_EXACT_LEVEL
        )));
    }
    let half_power_s = 0.5_f64.powi((k / 2 + 1) as i32);
    let t_zy = 1.0 - 0.5_f64.powi((k / 2) as i32);
    let (x, t_xy) = if delta % 2 == 0 {
        let n = (planner_level / 2) as i32;
        let h = 0.5_f64.powi(n);
        let x = BetaLine {
            intercept: 1.0 - h + half_power_s,
            slope: h / 2.0,
        };
        (x, 1.0 - 1.0 / (2.0_f64.powi(n + 1) - 1.0))
    } else {
        let m = ((planner_level + 1) / 2) as i32;
        let h = 0.5_f64.powi(m);
        let x = BetaLine {
            intercept: 1.0 - h + half_power_s,
            slope: 0.0,
        };
        (x, 1.0 - h)
    };
    Ok(ProductionBreakpoints {
        t_zy,
        t_xy,
        z: BetaLine {
            intercept: 0.5,
            slope: 0.5,
        },
        y: BetaLine {
            intercept: half_power_s,
            slope: 1.0,
        },
        x,
        unit: params.efficient_total(),
    })
}
