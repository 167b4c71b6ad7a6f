//! Brute-force verifiers.
//!
//! Everything here is exhaustive evaluation over uniform grids. None of it
//! is used by the closed-form paths; tests and the acceptance suite compare
//! the two. Ties are broken toward the smallest grid coordinate.
//!
//! Resolution budget: the payoffs are quadratics with curvature `a`, so a
//! grid spacing `h` misplaces a smooth peak by at most `h/2` and loses at
//! most `a h^2 / 8` in value.

use std::ops::RangeInclusive;

use crate::best_response;
use crate::design::{self, CooperationLevel};
use crate::error::{Error, Result};
use crate::market::{MarketParams, StrategyProfile};

/// Uniform grid `lo + i (hi - lo) / (n - 1)`, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    lo: f64,
    hi: f64,
    n: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidInput(format!("grid needs lo < hi, got [{lo}, {hi}]")));
        }
        if n < 2 {
            return Err(Error::InvalidInput(format!("grid needs n >= 2, got {n}")));
        }
        Ok(GridSpec { lo, hi, n })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }
}

/// Grid point maximizing `objective`, with its value.
pub fn grid_argmax<F>(objective: F, grid: &GridSpec) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut best = (grid.lo(), objective(grid.lo()));
    for x in grid.points().skip(1) {
        let v = objective(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Self-interested quantities `q_S^(0..=max_level)` by plain alternation of
/// best responses from the midpoint anchors.
pub fn self_interested_levels(max_level: u32, params: &MarketParams) -> Vec<f64> {
    let mut q_s = params.efficient_total() / 2.0;
    let mut q_b = params.f() / 2.0;
    let mut out = Vec::with_capacity(max_level as usize + 1);
    out.push(q_s);
    for _ in 0..max_level {
        let next_s = best_response::self_interested(q_b, params);
        let next_b = best_response::planner(q_s, params);
        q_s = next_s;
        q_b = next_b;
        out.push(q_s);
    }
    out
}

/// Exhaustive maximin over planner quantities: for each grid `q_B`, the
/// worst welfare over the opponent levels in `levels` (and, if
/// `include_limit`, the infimum point `q_S = (b-c)/2a - f/2`), then the best
/// grid point.
pub fn grid_maximin(
    outer: &GridSpec,
    levels: RangeInclusive<u32>,
    include_limit: bool,
    params: &MarketParams,
) -> (f64, f64) {
    let sequence = self_interested_levels(*levels.end(), params);
    let mut candidates: Vec<f64> = levels.map(|k| sequence[k as usize]).collect();
    if include_limit {
        candidates.push(params.efficient_total() / 2.0 - params.f() / 2.0);
    }
    grid_argmax(
        |q_b| {
            candidates
                .iter()
                .map(|&q_s| params.welfare(&StrategyProfile::new(q_s, q_b)))
                .fold(f64::INFINITY, f64::min)
        },
        outer,
    )
}

/// Exhaustive maximum of equal-level welfare over a grid of cooperation levels.
pub fn gamma_sweep(level: u32, grid: &GridSpec, params: &MarketParams) -> (CooperationLevel, f64) {
    let (g, w) = grid_argmax(
        |g| design::equal_level_welfare(level, CooperationLevel::new(g).unwrap(), params),
        grid,
    );
    (CooperationLevel::new(g).unwrap(), w)
}
