#![allow(dead_code)]

use levelk_core::MarketParams;
use proptest::prelude::*;

/// Reference market (a = b = 1, c = 0.25, m = 0) at normalized capacity `beta`.
pub fn reference_at(beta: f64) -> MarketParams {
    MarketParams::reference(beta * 0.75).unwrap()
}

/// `beta` in {0.05, 0.10, ..., 1.0}.
pub fn beta_grid_20() -> impl Iterator<Item = f64> {
    (1..=20).map(|i| i as f64 / 20.0)
}

pub fn beta_grid(n: usize) -> impl Iterator<Item = f64> {
    (1..=n).map(move |i| i as f64 / n as f64)
}

/// Arbitrary valid market with m >= 0 and capacity anywhere in (0, B].
pub fn any_params() -> impl Strategy<Value = MarketParams> {
    (0.2f64..5.0, 0.5f64..5.0, 0.0f64..0.9, 0.0f64..2.0, 0.01f64..=1.0).prop_map(|(a, b, c_frac, m, beta)| {
        let c = c_frac * b;
        let f = beta * (b - c) / a;
        MarketParams::new(a, b, c, m, f).unwrap()
    })
}

/// Arbitrary valid market with m = 0, for ratio statements.
pub fn ratio_params() -> impl Strategy<Value = MarketParams> {
    any_params().prop_map(|p| MarketParams::new(p.a(), p.b(), p.c(), 0.0, p.f()).unwrap())
}
