//! Browser bindings for the static explorer page in `www/`.
//!
//! Each exported function takes plain numbers and returns a JSON string, so
//! the page needs no generated TypeScript types. The same logic is available
//! natively through the `*_json` functions, which is what the tests exercise.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use levelk_core::design::{self, CooperationLevel};
use levelk_core::level_k::{self, Firm};
use levelk_core::welfare;
use levelk_core::{LevelSpec, MarketParams, RelativeLevel};

const MAX_LEVEL: u32 = 60;
const MAX_POINTS: usize = 2001;

fn params(a: f64, b: f64, c: f64, m: f64, f: f64) -> Result<MarketParams, String> {
    MarketParams::new(a, b, c, m, f).map_err(|e| e.to_string())
}

/// Capacity `beta * (b - c)/a`, validating the market constants first.
fn params_at_beta(a: f64, b: f64, c: f64, m: f64, beta: f64) -> Result<MarketParams, String> {
    let full = params(a, b, c, m, (b - c) / a)?;
    full.with_capacity(beta * full.efficient_total())
        .map_err(|e| e.to_string())
}

fn check_points(n: usize) -> Result<(), String> {
    if (2..=MAX_POINTS).contains(&n) {
        Ok(())
    } else {
        Err(format!("number of points must be in [2, {MAX_POINTS}], got {n}"))
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct LevelPoint {
    k: u32,
    q_s: f64,
    q_b: f64,
}

#[derive(Serialize)]
struct DeltaPoint {
    delta: i64,
    welfare: f64,
    por: Option<f64>,
}

#[derive(Serialize)]
struct LevelsView {
    paths: Vec<LevelPoint>,
    ne_q_s: f64,
    ne_q_b: f64,
    welfare_ne: f64,
    max_welfare: f64,
    k: u32,
    welfare_vs_delta: Vec<DeltaPoint>,
}

/// Level-k quantities for both suppliers up to `kmax`, and level-k welfare
/// for a self-interested level `k` against planner levels `k + delta`,
/// `delta` in `[-k, 10]`.
pub fn levels_json(a: f64, b: f64, c: f64, m: f64, f: f64, k: u32, kmax: u32) -> Result<String, String> {
    let p = params(a, b, c, m, f)?;
    if kmax > MAX_LEVEL || k > MAX_LEVEL {
        return Err(format!("levels are limited to {MAX_LEVEL} here"));
    }
    let paths = (0..=kmax)
        .map(|level| LevelPoint {
            k: level,
            q_s: level_k::closed_form(level, Firm::SelfInterested, &p),
            q_b: level_k::closed_form(level, Firm::Planner, &p),
        })
        .collect();
    let welfare_vs_delta = (-(k as i64)..=10)
        .map(|delta| {
            let spec = LevelSpec::finite(k, delta).map_err(|e| e.to_string())?;
            Ok(DeltaPoint {
                delta,
                welfare: welfare::level_k_performance(&spec, &p),
                por: welfare::price_of_rationality(&spec, &p).ok(),
            })
        })
        .collect::<Result<_, String>>()?;
    let ne = level_k::nash_equilibrium(&p);
    to_json(&LevelsView {
        paths,
        ne_q_s: ne.self_interested,
        ne_q_b: ne.planner,
        welfare_ne: welfare::equilibrium_performance(&p),
        max_welfare: p.max_welfare(),
        k,
        welfare_vs_delta,
    })
}

#[derive(Serialize)]
struct PorCurve {
    delta: RelativeLevel,
    por: Vec<Option<f64>>,
    /// `[lower, upper]` in `beta` where PoR < 1, for `delta >= 0`.
    region: Option<[f64; 2]>,
}

#[derive(Serialize)]
struct PorView {
    k: u32,
    beta: Vec<f64>,
    curves: Vec<PorCurve>,
}

/// Price of rationality against normalized capacity for several planner
/// offsets. `deltas` is a comma list of integers and `inf`.
pub fn por_curves_json(a: f64, b: f64, c: f64, m: f64, k: u32, deltas: &str, n: usize) -> Result<String, String> {
    check_points(n)?;
    if k > MAX_LEVEL {
        return Err(format!("levels are limited to {MAX_LEVEL} here"));
    }
    let betas: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
    let markets = betas
        .iter()
        .map(|&beta| params_at_beta(a, b, c, m, beta))
        .collect::<Result<Vec<_>, _>>()?;
    let mut curves = Vec::new();
    for item in deltas.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let delta: RelativeLevel = item.parse().map_err(|e: levelk_core::Error| e.to_string())?;
        let spec = LevelSpec::new(k, delta).map_err(|e| e.to_string())?;
        let region = match delta {
            RelativeLevel::Finite(d) if d >= 0 && k as i64 + d > 0 => welfare::por_lt_one_region(k, d)
                .ok()
                .filter(|r| !r.empty)
                .map(|r| [r.lower, r.upper]),
            _ => None,
        };
        curves.push(PorCurve {
            delta,
            por: markets
                .iter()
                .map(|p| welfare::price_of_rationality(&spec, p).ok())
                .collect(),
            region,
        });
    }
    if curves.is_empty() {
        return Err("no planner offsets given".into());
    }
    to_json(&PorView { k, beta: betas, curves })
}

#[derive(Serialize)]
struct CooperationView {
    k: u32,
    f: f64,
    gamma_star: f64,
    welfare_star: f64,
    welfare_ne: f64,
    multiple_optima: Option<bool>,
    capacity: Vec<f64>,
    gamma_star_vs_f: Vec<f64>,
    gamma: Vec<f64>,
    welfare_vs_gamma: Vec<f64>,
}

/// Optimal cooperation level against capacity for equal levels `k`, and the
/// welfare-versus-gamma curve at capacity `f`.
pub fn cooperation_json(a: f64, b: f64, c: f64, m: f64, f: f64, k: u32, n: usize) -> Result<String, String> {
    check_points(n)?;
    let p = params(a, b, c, m, f)?;
    if k == 0 || k > MAX_LEVEL {
        return Err(format!("cooperation design needs 1 <= k <= {MAX_LEVEL}"));
    }
    let star = design::optimal_cooperation_level(k, &p).map_err(|e| e.to_string())?;
    let capacity: Vec<f64> = (1..=n).map(|i| p.efficient_total() * i as f64 / n as f64).collect();
    let gamma_star_vs_f = capacity
        .iter()
        .map(|&cap| {
            let q = p.with_capacity(cap).map_err(|e| e.to_string())?;
            design::optimal_cooperation_level(k, &q)
                .map(|g| g.value())
                .map_err(|e| e.to_string())
        })
        .collect::<Result<_, String>>()?;
    let gamma: Vec<f64> = (0..n).map(|i| -3.0 + 6.0 * i as f64 / (n - 1) as f64).collect();
    let welfare_vs_gamma = gamma
        .iter()
        .map(|&g| {
            let level = CooperationLevel::new(g).map_err(|e| e.to_string())?;
            Ok(design::equal_level_welfare(k, level, &p))
        })
        .collect::<Result<_, String>>()?;
    to_json(&CooperationView {
        k,
        f,
        gamma_star: star.value(),
        welfare_star: design::equal_level_welfare(k, star, &p),
        welfare_ne: welfare::equilibrium_performance(&p),
        multiple_optima: if k % 2 == 1 {
            design::has_multiple_optima(k, &p).ok()
        } else {
            None
        },
        capacity,
        gamma_star_vs_f,
        gamma,
        welfare_vs_gamma,
    })
}

#[wasm_bindgen]
pub fn levels(a: f64, b: f64, c: f64, m: f64, f: f64, k: u32, kmax: u32) -> Result<String, JsError> {
    levels_json(a, b, c, m, f, k, kmax).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn por_curves(a: f64, b: f64, c: f64, m: f64, k: u32, deltas: &str, n: usize) -> Result<String, JsError> {
    por_curves_json(a, b, c, m, k, deltas, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cooperation(a: f64, b: f64, c: f64, m: f64, f: f64, k: u32, n: usize) -> Result<String, JsError> {
    cooperation_json(a, b, c, m, f, k, n).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: Result<String, String>) -> Value {
        serde_json::from_str(&s.unwrap()).unwrap()
    }

    #[test]
    fn levels_view_reference_market() {
        let v = parse(levels_json(1.0, 1.0, 0.25, 0.0, 0.5, 1, 6));
        assert_eq!(v["paths"].as_array().unwrap().len(), 7);
        assert_eq!(v["paths"][0]["q_s"], 0.375);
        assert_eq!(v["paths"][0]["q_b"], 0.25);
        assert_eq!(v["welfare_ne"], 0.2734375);
        let deltas = v["welfare_vs_delta"].as_array().unwrap();
        assert_eq!(deltas.len(), 12);
        let ahead = deltas.iter().find(|d| d["delta"] == 1).unwrap();
        assert_eq!(ahead["welfare"], 0.28125);
    }

    #[test]
    fn por_view_marks_regions() {
        let v = parse(por_curves_json(1.0, 1.0, 0.25, 0.0, 2, "-1, 0, 2, inf", 40));
        assert_eq!(v["beta"].as_array().unwrap().len(), 40);
        let curves = v["curves"].as_array().unwrap();
        assert_eq!(curves.len(), 4);
        assert!(curves[0]["region"].is_null());
        assert_eq!(curves[1]["region"][0], 0.5);
        assert_eq!(curves[3]["delta"], "inf");
        // small capacity: firm S already sits on its equilibrium floor at level 2
        assert_eq!(curves[3]["por"][0], 1.0);
        assert!(curves[3]["por"][39].as_f64().unwrap() > 1.0);
    }

    #[test]
    fn cooperation_view_peaks_at_gamma_star() {
        let v = parse(cooperation_json(1.0, 1.0, 0.25, 0.0, 0.5, 2, 601));
        assert!(v["gamma_star"].as_f64().unwrap().abs() < 1e-12);
        let star = v["welfare_star"].as_f64().unwrap();
        for w in v["welfare_vs_gamma"].as_array().unwrap() {
            assert!(w.as_f64().unwrap() <= star + 1e-12);
        }
        assert!(v["multiple_optima"].is_null());
        let odd = parse(cooperation_json(1.0, 1.0, 0.25, 0.0, 0.5, 1, 11));
        assert_eq!(odd["multiple_optima"], true);
    }

    #[test]
    fn invalid_inputs_are_reported() {
        assert!(levels_json(1.0, 1.0, 0.25, 0.0, 0.9, 1, 5)
            .unwrap_err()
            .contains("invalid market"));
        assert!(por_curves_json(1.0, 1.0, 0.25, 0.0, 2, "-3", 10).is_err());
        assert!(por_curves_json(1.0, 1.0, 0.25, 0.0, 2, "x", 10).is_err());
        assert!(por_curves_json(1.0, 1.0, 0.25, 0.0, 2, "0", 1).is_err());
        assert!(cooperation_json(1.0, 1.0, 0.25, 0.0, 0.5, 0, 10).is_err());
        assert!(levels_json(1.0, 1.0, 0.25, 0.0, 0.5, 1, 1000).is_err());
    }
}
