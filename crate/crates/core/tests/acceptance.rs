//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p levelk-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use levelk_core::best_response;
use levelk_core::design::{equal_level_welfare, optimal_cooperation_level, por_with_design};
use levelk_core::level_k::{closed_form, iterate};
use levelk_core::oracles::{gamma_sweep, grid_argmax, grid_maximin, self_interested_levels, GridSpec};
use levelk_core::strategies::{evii, expected_welfare, optimal_strategy, robust_strategy, stochastic_strategy, vci};
use levelk_core::welfare::{equilibrium_performance, level_k_performance, por_lt_one_region, price_of_rationality};
use levelk_core::{Firm, LevelSpec, MarketParams, RationalityDistribution, StrategyProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn reference_at(beta: f64) -> MarketParams {
    MarketParams::reference(beta * 0.75).unwrap()
}

fn betas(n: usize) -> impl Iterator<Item = f64> {
    (1..=n).map(move |i| i as f64 / n as f64)
}

fn spec(k: u32, delta: i64) -> LevelSpec {
    LevelSpec::finite(k, delta).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn closed_form_fidelity() -> Outcome {
    let mut worst: f64 = 0.0;
    for beta in betas(20) {
        let p = reference_at(beta);
        for k in 0..=40 {
            for firm in [Firm::SelfInterested, Firm::Planner] {
                worst = worst.max((closed_form(k, firm, &p) - iterate(k, firm, &p)).abs());
            }
        }
    }
    ensure(worst <= 1e-10, || format!("max |closed - iterative| = {worst:e}"))?;
    Ok(format!(
        "max |closed - iterative| = {worst:e} over 20 capacities x k in [0,40]"
    ))
}

fn monotone_levels() -> Outcome {
    let mut checks = 0;
    for beta in betas(20) {
        let p = reference_at(beta);
        let (half_b, f) = (p.efficient_total() / 2.0, p.f());
        for k in 0..=40 {
            let s = closed_form(k, Firm::SelfInterested, &p);
            let q_b = closed_form(k, Firm::Planner, &p);
            let s_next = closed_form(k + 1, Firm::SelfInterested, &p);
            let b_next = closed_form(k + 1, Firm::Planner, &p);
            ensure(s_next <= s + 1e-12, || format!("q_S rises at beta={beta}, k={k}"))?;
            ensure(b_next >= q_b - 1e-12, || format!("q_B falls at beta={beta}, k={k}"))?;
            ensure(half_b - f / 2.0 <= s && s <= half_b, || {
                format!("q_S out of bounds at beta={beta}, k={k}")
            })?;
            ensure(f / 2.0 <= q_b && q_b <= f, || {
                format!("q_B out of bounds at beta={beta}, k={k}")
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} (capacity, level) pairs monotone and within bounds"))
}

fn unimodal_in_delta() -> Outcome {
    for beta in betas(20) {
        let p = reference_at(beta);
        for k in 0..=10u32 {
            let w: Vec<f64> = (-(k as i64)..=10)
                .map(|d| level_k_performance(&spec(k, d), &p))
                .collect();
            let peak = k as usize + 1;
            for i in 0..w.len() - 1 {
                let ok = if i < peak {
                    w[i + 1] >= w[i] - 1e-12
                } else {
                    w[i + 1] <= w[i] + 1e-12
                };
                ensure(ok, || {
                    format!("not unimodal at beta={beta}, k={k}, delta={}", i as i64 - k as i64)
                })?;
            }
        }
    }
    Ok("welfare rises to delta = 1 and falls after, k in [0,10], delta in [-k,10]".into())
}

fn less_rational_planner() -> Outcome {
    let mut min_por = f64::INFINITY;
    for beta in betas(50) {
        let p = reference_at(beta);
        for k in 1..=12u32 {
            for d in -(k as i64)..=-1 {
                min_por = min_por.min(price_of_rationality(&spec(k, d), &p).map_err(|e| e.to_string())?);
            }
        }
    }
    ensure(min_por >= 1.0 - 1e-9, || format!("min PoR = {min_por}"))?;
    Ok(format!("min PoR over delta < 0 = {min_por:.12}"))
}

fn region_matches_oracle() -> Outcome {
    let mut points = 0;
    for k in 1..=8u32 {
        for d in 0..=5i64 {
            let region = por_lt_one_region(k, d).map_err(|e| e.to_string())?;
            for beta in betas(400) {
                if (beta - region.lower).abs() <= 1e-6 || (beta - region.upper).abs() <= 1e-6 {
                    continue;
                }
                let p = reference_at(beta);
                // oracle profile: independent alternation for both levels
                let q_s = self_interested_levels(k, &p)[k as usize];
                let planner_level = (k as i64 + d) as u32;
                let q_b = planner_by_alternation(planner_level, &p);
                let por = equilibrium_performance(&p) / p.welfare(&StrategyProfile::new(q_s, q_b));
                ensure((por < 1.0 - 1e-12) == region.contains(beta), || {
                    format!(
                        "k={k}, delta={d}, beta={beta}: PoR={por}, region=({}, {})",
                        region.lower, region.upper
                    )
                })?;
                points += 1;
            }
        }
    }
    Ok(format!("{points} grid points agree with the closed-form region"))
}

/// Planner quantity at `level` by alternating best responses from the
/// midpoint anchors.
fn planner_by_alternation(level: u32, p: &MarketParams) -> f64 {
    let (mut q_s, mut q_b) = (p.efficient_total() / 2.0, p.f() / 2.0);
    for _ in 0..level {
        let next_s = best_response::self_interested(q_b, p);
        q_b = best_response::planner(q_s, p);
        q_s = next_s;
    }
    q_b
}

fn spot_values() -> Outcome {
    let p = MarketParams::reference(0.5).unwrap();
    let close = |x: f64, y: f64, tol: f64| (x - y).abs() <= tol;

    let w_ne = equilibrium_performance(&p);
    let w_11 = level_k_performance(&spec(1, 1), &p);
    let por = price_of_rationality(&spec(1, 1), &p).map_err(|e| e.to_string())?;
    let q_rs = robust_strategy(&p);
    ensure(close(w_ne, 0.2734375, 1e-12), || format!("W_NE = {w_ne}"))?;
    ensure(close(w_11, 0.28125, 1e-12), || format!("W(1,1) = {w_11}"))?;
    ensure(close(por, 0.9722222222222222, 1e-9), || format!("PoR(1,1) = {por}"))?;
    ensure(close(q_rs, 0.5, 1e-12), || format!("q_RS = {q_rs}"))?;

    // oracle confirmation: long alternation for the equilibrium, grid argmax
    // for the planner's reply, grid maximin for the robust quantity
    let q_s_limit = *self_interested_levels(200, &p).last().unwrap();
    let fine = GridSpec::new(0.0, p.f(), 100_001).unwrap();
    let (q_b_ne, _) = grid_argmax(|q| p.welfare(&StrategyProfile::new(q_s_limit, q)), &fine);
    let w_ne_oracle = p.welfare(&StrategyProfile::new(q_s_limit, q_b_ne));
    let q_s1 = self_interested_levels(1, &p)[1];
    let (q_b2, _) = grid_argmax(|q| p.welfare(&StrategyProfile::new(q_s1, q)), &fine);
    let w_11_oracle = p.welfare(&StrategyProfile::new(q_s1, q_b2));
    let (q_rs_oracle, _) = grid_maximin(&GridSpec::new(0.0, p.f(), 4001).unwrap(), 0..=60, true, &p);
    ensure(close(w_ne_oracle, w_ne, 1e-9), || {
        format!("oracle W_NE = {w_ne_oracle}")
    })?;
    ensure(close(w_11_oracle, w_11, 1e-9), || {
        format!("oracle W(1,1) = {w_11_oracle}")
    })?;
    ensure(close(w_ne_oracle / w_11_oracle, por, 1e-9), || {
        "oracle PoR differs".into()
    })?;
    ensure(close(q_rs_oracle, q_rs, 2e-4), || {
        format!("oracle q_RS = {q_rs_oracle}")
    })?;
    Ok(format!(
        "W_NE={w_ne}, W(1,1)={w_11}, PoR(1,1)={por:.12}, q_RS={q_rs}; oracles agree"
    ))
}

fn stochastic_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut dists = vec![RationalityDistribution::truncated_poisson(1.5, 20).map_err(|e| e.to_string())?];
    for _ in 0..10 {
        let weights: Vec<(u32, f64)> = (0..=20).map(|k| (k, rng.random::<f64>())).collect();
        dists.push(RationalityDistribution::from_weights(weights).map_err(|e| e.to_string())?);
    }
    let mut worst_gap = f64::NEG_INFINITY;
    for beta in betas(20) {
        let p = reference_at(beta);
        let grid = GridSpec::new(0.0, p.f(), 400).unwrap();
        for dist in &dists {
            let at_ss = expected_welfare(dist, stochastic_strategy(dist, &p), &p);
            let (_, best) = grid_argmax(|q| expected_welfare(dist, q, &p), &grid);
            worst_gap = worst_gap.max(best - at_ss);
        }
        for k in 0..=20 {
            let degenerate = RationalityDistribution::degenerate(k);
            ensure(stochastic_strategy(&degenerate, &p) == optimal_strategy(k, &p), || {
                format!("degenerate distribution at k={k}, beta={beta} differs from optimal strategy")
            })?;
        }
    }
    ensure(worst_gap <= 1e-9, || {
        format!("grid beats stochastic strategy by {worst_gap:e}")
    })?;
    Ok(format!(
        "11 distributions x 20 capacities, max grid excess {worst_gap:e}; degenerate case exact"
    ))
}

fn robust_maximin() -> Outcome {
    let mut worst: f64 = 0.0;
    for beta in betas(20) {
        let p = reference_at(beta);
        let grid = GridSpec::new(0.0, p.f(), 4001).unwrap();
        let (q, _) = grid_maximin(&grid, 0..=60, true, &p);
        worst = worst.max((q - robust_strategy(&p)).abs());
    }
    ensure(worst <= 2e-4, || format!("max |oracle - robust| = {worst:e}"))?;
    Ok(format!("max |maximin argmax - robust strategy| = {worst:e}"))
}

fn optimal_gamma_matches_sweep() -> Outcome {
    let grid = GridSpec::new(-3.0, 3.0, 6001).unwrap();
    // the welfare peak is often a kink, so a grid of step h can fall short of
    // it by O(h); the sweep is an upper-bound check on what gamma* misses
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_gap: f64 = 0.0;
    for beta in betas(20) {
        let p = reference_at(beta);
        for k in 1..=12 {
            let star = optimal_cooperation_level(k, &p).map_err(|e| e.to_string())?;
            ensure((-1.0..=1.0).contains(&star.value()), || {
                format!("gamma* = {} outside [-1,1] at k={k}, beta={beta}", star.value())
            })?;
            let w_star = equal_level_welfare(k, star, &p);
            let (_, swept) = gamma_sweep(k, &grid, &p);
            let local =
                GridSpec::new(star.value() - 2.0 * grid.step(), star.value() + 2.0 * grid.step(), 4001).unwrap();
            let (_, local_best) = gamma_sweep(k, &local, &p);
            let excess = swept.max(local_best) - w_star;
            ensure(excess <= 1e-9, || {
                format!("sweep beats gamma* by {excess:e} at k={k}, beta={beta}")
            })?;
            worst_excess = worst_excess.max(excess);
            worst_gap = worst_gap.max((w_star - swept).abs());
        }
    }
    Ok(format!(
        "no sweep point beats W(gamma*) (max excess {worst_excess:e}); max |W(gamma*) - 6001-grid max| = {worst_gap:e} from kinked peaks; gamma* in [-1,1]"
    ))
}

fn designed_por() -> Outcome {
    for beta in betas(20) {
        let p = reference_at(beta);
        let mut even = None;
        for k in 1..=12u32 {
            let por = por_with_design(k, &p).map_err(|e| e.to_string())?;
            ensure(por <= 1.0 + 1e-9, || format!("PoR = {por} at k={k}, beta={beta}"))?;
            if k % 2 == 0 {
                let base = *even.get_or_insert(por);
                ensure((por - base).abs() <= 1e-9, || {
                    format!("even-k PoR varies at k={k}, beta={beta}")
                })?;
            } else if k >= 3 {
                let w = |k| equal_level_welfare(k, optimal_cooperation_level(k, &p).unwrap(), &p);
                ensure(w(k) <= w(k - 2) + 1e-12, || {
                    format!("odd-k welfare rises at k={k}, beta={beta}")
                })?;
            }
        }
    }
    Ok("designed PoR <= 1, constant over even k, odd-k welfare non-increasing".into())
}

fn information_values() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut clamped = 0;
    for _ in 0..1000 {
        let (a, b) = (rng.random_range(0.2..5.0), rng.random_range(0.5..5.0));
        let c = rng.random_range(0.0..0.9) * b;
        let m = rng.random_range(0.0..2.0);
        let beta: f64 = rng.random_range(0.01..=1.0);
        let p = MarketParams::new(a, b, c, m, beta * (b - c) / a).map_err(|e| e.to_string())?;
        let dist = if rng.random_bool(0.5) {
            RationalityDistribution::truncated_poisson(rng.random_range(0.1..5.0), 20)
        } else {
            let support = rng.random_range(1..8);
            RationalityDistribution::from_weights(
                (0..support)
                    .map(|_| rng.random_range(0..=25))
                    .collect::<std::collections::BTreeSet<u32>>()
                    .into_iter()
                    .map(|k| (k, rng.random_range(0.01..1.0)))
                    .collect(),
            )
        }
        .map_err(|e| e.to_string())?;
        let tol = 1e-12 * (1.0 + p.max_welfare());
        let value = evii(&dist, &p);
        ensure(value >= -tol, || format!("EVII = {value} < 0"))?;
        for &(k, _) in dist.masses() {
            for q in [stochastic_strategy(&dist, &p), robust_strategy(&p)] {
                let v = vci(k, q, &p);
                ensure(v >= -tol, || format!("VCI = {v} < 0 at k={k}"))?;
            }
        }
        if stochastic_strategy(&dist, &p) == p.f() && robust_strategy(&p) == p.f() {
            ensure(value == 0.0, || {
                format!("EVII = {value} although both strategies clamp")
            })?;
            clamped += 1;
        }
    }
    // reference market, Poisson(1.5): zero exactly in the small-capacity regime
    let poisson = RationalityDistribution::truncated_poisson(1.5, 20).map_err(|e| e.to_string())?;
    for beta in betas(20) {
        let p = reference_at(beta);
        let both_clamp = stochastic_strategy(&poisson, &p) == p.f() && robust_strategy(&p) == p.f();
        let value = evii(&poisson, &p);
        ensure((value == 0.0) == both_clamp, || {
            format!("EVII = {value} at beta={beta}, clamped={both_clamp}")
        })?;
    }
    Ok(format!(
        "1000 fuzzed cases non-negative ({clamped} clamped with EVII = 0)"
    ))
}

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            name: "closed-form fidelity",
            budget: Some(Duration::from_secs(1)),
            check: closed_form_fidelity,
        },
        Criterion {
            name: "level monotonicity and bounds",
            budget: None,
            check: monotone_levels,
        },
        Criterion {
            name: "welfare unimodal in delta",
            budget: None,
            check: unimodal_in_delta,
        },
        Criterion {
            name: "less rational planner never helps",
            budget: None,
            check: less_rational_planner,
        },
        Criterion {
            name: "PoR < 1 region vs oracle",
            budget: Some(Duration::from_secs(10)),
            check: region_matches_oracle,
        },
        Criterion {
            name: "reference spot values",
            budget: None,
            check: spot_values,
        },
        Criterion {
            name: "stochastic strategy optimality",
            budget: None,
            check: stochastic_optimality,
        },
        Criterion {
            name: "robust strategy maximin",
            budget: None,
            check: robust_maximin,
        },
        Criterion {
            name: "optimal cooperation level vs sweep",
            budget: Some(Duration::from_secs(30)),
            check: optimal_gamma_matches_sweep,
        },
        Criterion {
            name: "designed PoR bound and parity",
            budget: None,
            check: designed_por,
        },
        Criterion {
            name: "information values",
            budget: None,
            check: information_values,
        },
    ];
    let mut failures = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(msg), Some(budget)) if elapsed > budget => Err(format!("{msg}; took {elapsed:.2?}, budget {budget:?}")),
            (other, _) => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {}: {msg} [{elapsed:.2?}]", i + 1, c.name),
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {}: {msg} [{elapsed:.2?}]", i + 1, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
