//! Level-k behavior of both suppliers.
//!
//! Level-0 suppliers play the midpoint of their feasible interval:
//! `(b - c)/2a` for the self-interested supplier and `f/2` for the planner.
//! A level-k supplier best responds to the opponent's level-(k-1) quantity.
//! Quantities are available by direct recursion ([`iterate`]) and in closed
//! form ([`closed_form`]); both routes are kept so they can check each other.
//! The same holds for play under the planner's designed utility
//! ([`designed_iterate`] and [`designed_closed_form`]).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::best_response;
use crate::design::CooperationLevel;
use crate::error::{Error, Result};
use crate::market::{MarketParams, StrategyProfile};

/// Above this level the closed forms return the `k -> infinity` limit
/// (the Nash quantities); the finite-level terms are far below `f64`
/// resolution long before this point.
pub const MAX_EXACT_LEVEL: u32 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Firm {
    SelfInterested,
    Planner,
}

/// Planner level relative to the self-interested supplier's level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelativeLevel {
    Finite(i64),
    /// The planner plays its Nash quantity `f`.
    Infinite,
}

impl fmt::Display for RelativeLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelativeLevel::Finite(d) => write!(f, "{d}"),
            RelativeLevel::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for RelativeLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(RelativeLevel::Infinite);
        }
        s.parse::<i64>()
            .map(RelativeLevel::Finite)
            .map_err(|_| Error::InvalidInput(format!("relative level must be an integer or `inf`, got `{s}`")))
    }
}

impl Serialize for RelativeLevel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RelativeLevel::Finite(d) => serializer.serialize_i64(*d),
            RelativeLevel::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Levels `k` for the self-interested supplier and `k + delta` for the planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelSpec {
    k: u32,
    delta: RelativeLevel,
}

impl LevelSpec {
    pub fn new(k: u32, delta: RelativeLevel) -> Result<Self> {
        if let RelativeLevel::Finite(d) = delta {
            if d < -(k as i64) {
                return Err(Error::InvalidInput(format!(
                    "planner level k+delta must be non-negative, got k={k}, delta={d}"
                )));
            }
            if k as i64 + d > u32::MAX as i64 {
                return Err(Error::InvalidInput(format!(
                    "planner level k+delta={} too large",
                    k as i64 + d
                )));
            }
        }
        Ok(LevelSpec { k, delta })
    }

    pub fn finite(k: u32, delta: i64) -> Result<Self> {
        Self::new(k, RelativeLevel::Finite(delta))
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn delta(&self) -> RelativeLevel {
        self.delta
    }

    /// `k + delta`, or `None` for the infinite planner.
    pub fn planner_level(&self) -> Option<u32> {
        match self.delta {
            RelativeLevel::Finite(d) => Some((self.k as i64 + d) as u32),
            RelativeLevel::Infinite => None,
        }
    }

    /// `(q_S^(k), q_B^(k+delta))` from the closed forms.
    pub fn profile(&self, params: &MarketParams) -> StrategyProfile {
        let q_s = closed_form(self.k, Firm::SelfInterested, params);
        let q_b = match self.planner_level() {
            Some(level) => closed_form(level, Firm::Planner, params),
            None => nash_equilibrium(params).planner,
        };
        StrategyProfile::new(q_s, q_b)
    }
}

pub fn level0(firm: Firm, params: &MarketParams) -> f64 {
    match firm {
        Firm::SelfInterested => params.efficient_total() / 2.0,
        Firm::Planner => params.f() / 2.0,
    }
}

/// `(q_S^(k), q_B^(k))` by alternating best responses from level 0.
pub fn iterate_pair(k: u32, params: &MarketParams) -> StrategyProfile {
    let mut q_s = level0(Firm::SelfInterested, params);
    let mut q_b = level0(Firm::Planner, params);
    for _ in 0..k {
        let next_s = best_response::self_interested(q_b, params);
        let next_b = best_response::planner(q_s, params);
        q_s = next_s;
        q_b = next_b;
    }
    StrategyProfile::new(q_s, q_b)
}

pub fn iterate(k: u32, firm: Firm, params: &MarketParams) -> f64 {
    pick(iterate_pair(k, params), firm)
}

/// Closed-form level-k quantity.
///
/// With `B = (b - c)/a` and `n = k/2` (even `k`) or `n = (k + 1)/2` (odd `k`):
///
/// | | even `k` | odd `k` |
/// |---|---|---|
/// | `q_S` | `max{B / 2^(n+1), B/2 - f/2}` | `max{B / 2^n - f / 2^(n+1), B/2 - f/2}` |
/// | `q_B` | `min{(1 - 2^-n) B + f / 2^(n+1), f}` | `min{(1 - 2^-n) B, f}` |
pub fn closed_form(k: u32, firm: Firm, params: &MarketParams) -> f64 {
    if k > MAX_EXACT_LEVEL {
        return pick(nash_equilibrium(params), firm);
    }
    let big_b = params.efficient_total();
    let f = params.f();
    let floor_s = big_b / 2.0 - f / 2.0;
    if k.is_multiple_of(2) {
        let h = 0.5_f64.powi((k / 2) as i32);
        match firm {
            Firm::SelfInterested => (big_b * h / 2.0).max(floor_s),
            Firm::Planner => ((1.0 - h) * big_b + f * h / 2.0).min(f),
        }
    } else {
        let h = 0.5_f64.powi(k.div_ceil(2) as i32);
        match firm {
            Firm::SelfInterested => (big_b * h - f * h / 2.0).max(floor_s),
            Firm::Planner => ((1.0 - h) * big_b).min(f),
        }
    }
}

/// `(q_S, q_B)` at level k under the designed utility, by alternating
/// the self-interested best response and the designed planner response.
pub fn designed_iterate_pair(k: u32, gamma: CooperationLevel, params: &MarketParams) -> StrategyProfile {
    let mut q_s = level0(Firm::SelfInterested, params);
    let mut q_b = level0(Firm::Planner, params);
    for _ in 0..k {
        let next_s = best_response::self_interested(q_b, params);
        let next_b = best_response::planner_designed(q_s, gamma, params);
        q_s = next_s;
        q_b = next_b;
    }
    StrategyProfile::new(q_s, q_b)
}

pub fn designed_iterate(k: u32, gamma: CooperationLevel, firm: Firm, params: &MarketParams) -> f64 {
    pick(designed_iterate_pair(k, gamma, params), firm)
}

/// Closed-form level-k quantity when the planner maximizes `W + gamma pi_S`.
///
/// Three regimes: `gamma < -1` (planner saturates the line from level 1 on),
/// `-1 <= gamma <= 1`, and `gamma > 1` (planner withdraws at odd levels).
/// Powers are written as `((1 + gamma)/2)^n`, with `0^0 = 1`.
pub fn designed_closed_form(k: u32, gamma: CooperationLevel, firm: Firm, params: &MarketParams) -> f64 {
    let g = gamma.value();
    let big_b = params.efficient_total();
    let f = params.f();
    let half = big_b / 2.0;
    let floor_s = half - f / 2.0;
    let ratio = (1.0 + g) / 2.0;
    let even = k.is_multiple_of(2);

    if g < -1.0 {
        return match (firm, k) {
            (Firm::SelfInterested, 0) => half,
            (Firm::SelfInterested, 1) => half - f / 4.0,
            (Firm::SelfInterested, _) => floor_s,
            (Firm::Planner, 0) => f / 2.0,
            (Firm::Planner, _) => f,
        };
    }

    let cooperative = g > 1.0;
    if even {
        let phi = ratio.powi((k / 2) as i32);
        match (firm, cooperative) {
            (Firm::SelfInterested, false) => (phi * half).max(floor_s),
            (Firm::Planner, false) => (big_b - phi * (big_b - f / 2.0)).min(f),
            (Firm::SelfInterested, true) => half,
            (Firm::Planner, true) => (big_b - phi * (big_b - f / 2.0)).max(0.0),
        }
    } else {
        let psi = ratio.powi(((k - 1) / 2) as i32);
        let uncapped_s = psi / 2.0 * (big_b - f / 2.0);
        match (firm, cooperative) {
            (Firm::SelfInterested, false) => uncapped_s.max(floor_s),
            (Firm::Planner, false) => {
                let phi = ratio.powi(k.div_ceil(2) as i32);
                ((1.0 - phi) * big_b).min(f)
            }
            (Firm::SelfInterested, true) => uncapped_s.min(half),
            (Firm::Planner, true) => 0.0,
        }
    }
}

pub fn designed_profile(k: u32, gamma: CooperationLevel, params: &MarketParams) -> StrategyProfile {
    StrategyProfile::new(
        designed_closed_form(k, gamma, Firm::SelfInterested, params),
        designed_closed_form(k, gamma, Firm::Planner, params),
    )
}

/// Nash equilibrium `((b - c)/2a - f/2, f)`, the `k -> infinity` limit of
/// level-k play.
pub fn nash_equilibrium(params: &MarketParams) -> StrategyProfile {
    let f = params.f();
    StrategyProfile::new(params.efficient_total() / 2.0 - f / 2.0, f)
}

fn pick(profile: StrategyProfile, firm: Firm) -> f64 {
    match firm {
        Firm::SelfInterested => profile.self_interested,
        Firm::Planner => profile.planner,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use Firm::*;

    fn p(f: f64) -> MarketParams {
        MarketParams::reference(f).unwrap()
    }

    fn gamma(g: f64) -> CooperationLevel {
        CooperationLevel::new(g).unwrap()
    }

    #[test]
    fn level0_midpoints() {
        assert_abs_diff_eq!(level0(SelfInterested, &p(0.5)), 0.375);
        assert_abs_diff_eq!(level0(Planner, &p(0.5)), 0.25);
        assert_abs_diff_eq!(level0(Planner, &p(0.75)), 0.375);
    }

    #[test]
    fn iterative_examples() {
        let p = p(0.5);
        assert_eq!(iterate(0, SelfInterested, &p), level0(SelfInterested, &p));
        assert_eq!(iterate(0, Planner, &p), level0(Planner, &p));
        assert_abs_diff_eq!(iterate(1, SelfInterested, &p), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(iterate(2, Planner, &p), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let p = p(0.5);
        assert_eq!(closed_form(0, SelfInterested, &p), 0.375);
        assert_eq!(closed_form(0, Planner, &p), 0.25);
        assert_abs_diff_eq!(closed_form(2, SelfInterested, &p), 0.1875, epsilon = 1e-12);
        assert_abs_diff_eq!(closed_form(60, SelfInterested, &p), 0.125, epsilon = 1e-12);
        // early levels as written out by hand
        assert_abs_diff_eq!(closed_form(1, Planner, &p), 0.375, epsilon = 1e-12);
        assert_abs_diff_eq!(closed_form(2, Planner, &p), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_beyond_cap_is_nash() {
        let p = p(0.3);
        let ne = nash_equilibrium(&p);
        assert_eq!(closed_form(MAX_EXACT_LEVEL + 1, SelfInterested, &p), ne.self_interested);
        assert_eq!(closed_form(u32::MAX, Planner, &p), ne.planner);
        assert_abs_diff_eq!(
            closed_form(MAX_EXACT_LEVEL, SelfInterested, &p),
            ne.self_interested,
            epsilon = 1e-15
        );
    }

    #[test]
    fn nash_examples() {
        let full = p(0.75);
        let ne = nash_equilibrium(&full);
        assert_eq!(ne.self_interested, 0.0);
        assert_eq!(ne.planner, 0.75);

        let p = p(0.5);
        let ne = nash_equilibrium(&p);
        assert_abs_diff_eq!(ne.self_interested, 0.125, epsilon = 1e-12);
        assert_eq!(ne.planner, 0.5);
        assert_abs_diff_eq!(
            best_response::self_interested(ne.planner, &p),
            ne.self_interested,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            best_response::planner(ne.self_interested, &p),
            ne.planner,
            epsilon = 1e-12
        );
    }

    #[test]
    fn designed_examples() {
        let p = p(0.5);
        for k in 0..12 {
            for firm in [SelfInterested, Planner] {
                assert_abs_diff_eq!(
                    designed_closed_form(k, CooperationLevel::ZERO, firm, &p),
                    closed_form(k, firm, &p),
                    epsilon = 1e-15
                );
            }
        }
        assert_eq!(designed_closed_form(3, gamma(-2.0), Planner, &p), 0.5);
        assert_eq!(designed_closed_form(1, gamma(2.0), Planner, &p), 0.0);
    }

    #[test]
    fn designed_large_gamma_has_no_nan() {
        let p = p(0.4);
        for k in [0, 1, 2, 3, 500, 1001, 4000] {
            for firm in [SelfInterested, Planner] {
                let q = designed_closed_form(k, gamma(1e6), firm, &p);
                assert!(q.is_finite() && q >= 0.0, "k={k} firm={firm:?} q={q}");
            }
        }
    }

    #[test]
    fn level_spec_validation() {
        assert!(LevelSpec::finite(2, -3).is_err());
        assert!(LevelSpec::finite(2, -2).is_ok());
        let spec = LevelSpec::new(3, RelativeLevel::Infinite).unwrap();
        assert_eq!(spec.planner_level(), None);
        assert_eq!(spec.profile(&p(0.5)).planner, 0.5);
    }

    #[test]
    fn relative_level_parsing() {
        assert_eq!("inf".parse::<RelativeLevel>().unwrap(), RelativeLevel::Infinite);
        assert_eq!(" -2 ".parse::<RelativeLevel>().unwrap(), RelativeLevel::Finite(-2));
        assert!("1.5".parse::<RelativeLevel>().is_err());
        assert_eq!(RelativeLevel::Infinite.to_string(), "inf");
    }
}
