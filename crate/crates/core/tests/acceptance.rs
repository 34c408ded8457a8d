//! Acceptance run: one PASS/FAIL line per criterion, with its runtime against the budget.
//!
//! The process exits 0 after printing every line so the rest of the workspace
//! suite still runs; set `WSLICE_ACCEPTANCE_STRICT=1` to exit 1 on any FAIL.

mod common;

use std::fmt::Debug;
use std::time::{Duration, Instant};

use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wslice_core::experiments::alpha_set::expected_alpha_set;
use wslice_core::experiments::thm43::spread;
use wslice_core::experiments::{
    alpha_set_probe, combine_specs, example32_cell, obstruction_rows, predicted_alpha_set, probe_algebra, scaling_rows, toy_exhaustion, CombineMode,
    Ex32Options, ToyInstance,
};
use wslice_core::geometry::{rectangle, DecoratedSquareSpec, Family, Point2, Rect};
use wslice_core::metrics::grid::build_grid;
use wslice_core::metrics::paths::d_alpha;
use wslice_core::slices::witness::{slice_failure_witness, WitnessVerdict};

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn scaling_identity() -> Outcome {
    let alphas: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    let js: Vec<u32> = (2..=12).collect();
    let mut worst = 0.0f64;
    let mut n = 0;
    for a0 in [0.25, 0.5, 0.75] {
        for r in scaling_rows(a0, 3.0, 6.0, &alphas, &js, Family::Thm43ThinShort).map_err(|e| e.to_string())? {
            let v = (r.l / r.l_prime).log2() / r.j as f64;
            worst = worst.max((v - (r.alpha - a0)).abs());
            n += 1;
        }
    }
    check(n == 330 && worst <= 1e-12, format!("{n} rows, max |(1/j)log2(L/L') - (alpha - alpha0)| = {worst:.2e}"))
}

fn metric_oracles() -> Outcome {
    let err = |e: wslice_core::Error| e.to_string();
    let mut parts = Vec::new();
    let mut ok = true;

    let dom = rectangle(Rect::new(0.0, 0.0, 10.0, 20.0)).map_err(err)?;
    let g = build_grid(&dom, Rect::new(3.0, 0.0, 7.0, 2.0), 0.01).map_err(err)?;
    let v = d_alpha(&g, Point2::new(5.0, 0.1), Point2::new(5.0, 0.5), 0.0).map_err(err)?.value;
    ok &= rel(v, 5f64.ln()) <= 0.05;
    parts.push(format!("(a) rel err {:.4}", rel(v, 5f64.ln())));

    // grid-node endpoints, so the only error is the stencil's
    let h = 1.0 / 64.0;
    let sq = rectangle(Rect::new(0.0, 0.0, 1.0, 1.0)).map_err(err)?;
    let g = build_grid(&sq, sq.bbox(), h).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let mut pt = || Point2::new(rng.gen_range(3..=61) as f64 * h, rng.gen_range(3..=61) as f64 * h);
        let (x, y) = (pt(), pt());
        if x == y {
            continue;
        }
        let v = d_alpha(&g, x, y, 1.0).map_err(err)?.value;
        worst = worst.max(rel(v, x.dist(y)));
    }
    ok &= worst <= 0.03;
    parts.push(format!("(b) max rel err {worst:.4} over 100 pairs"));

    let (l, w) = (1.0, 0.05);
    let dom = rectangle(Rect::new(-w, 0.0, l + w, w)).map_err(err)?;
    let g = build_grid(&dom, dom.bbox(), w / 8.0).map_err(err)?;
    let (x, y) = (Point2::new(0.0, w / 2.0), Point2::new(l, w / 2.0));
    let v0 = d_alpha(&g, x, y, 0.0).map_err(err)?.value;
    let v5 = d_alpha(&g, x, y, 0.5).map_err(err)?.value;
    let (e0, e5) = (rel(v0, 2.0 * l / w), rel(v5, l * (2.0 / w).sqrt()));
    ok &= e0 <= 0.02 && e5 <= 0.02;
    parts.push(format!("(c) rel err {e0:.4} at alpha=0, {e5:.4} at alpha=1/2"));
    check(ok, parts.join("; "))
}

fn ex32_positive() -> Outcome {
    let opts = Ex32Options::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for &j in &opts.js {
        let dom = DecoratedSquareSpec::ex32(&[j]).and_then(|s| s.build()).map_err(|e| e.to_string())?;
        let (s, _) = example32_cell(&dom, j, &opts).map_err(|e| e.to_string())?;
        let c = s.c_all.unwrap_or(f64::INFINITY);
        ok &= s.nontrivial >= 50 && c <= 32.0 && s.ws1_plus_fraction >= 0.95;
        parts.push(format!(
            "j={j}: {} pairs, C(WS-1..3) = {:.2}, C(WS-1..5) = {c:.2}, WS-1+ {:.0}%",
            s.nontrivial,
            s.c_ws123.unwrap_or(f64::INFINITY),
            100.0 * s.ws1_plus_fraction
        ));
    }
    check(ok, parts.join("; "))
}

fn ex32_negative() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut ks = Vec::new();
    for j in 2..=5u32 {
        let dom = DecoratedSquareSpec::ex32(&[j]).and_then(|s| s.build()).map_err(|e| e.to_string())?;
        let w = slice_failure_witness(&dom, j, 10.0).map_err(|e| e.to_string())?;
        let de = (w.delta_u - w.r / (2.0 * 2f64.sqrt())).abs();
        if j >= 4 {
            ok &= w.verdict == WitnessVerdict::Impossible && de <= 1e-9;
        }
        if j <= 4 {
            ks.push(w.k_uy);
        }
        parts.push(format!("j={j}: {:?}, |delta(u) - r/(2 sqrt 2)| = {de:.1e}, k(u,y) = {:.2}", w.verdict, w.k_uy));
    }
    ok &= ks.windows(2).all(|p| p[1] > p[0]);
    check(ok, parts.join("; "))
}

fn thm43_obstruction() -> Outcome {
    let (a0, alphas) = (0.5, [0.25, 0.5, 0.75]);
    let err = |e: wslice_core::Error| e.to_string();
    let mut ok = true;
    let mut parts = Vec::new();
    let mut rows = Vec::new();
    for j in [2u32, 3] {
        let dom = DecoratedSquareSpec::thm43(a0, 3.0, 6.0, &[j]).and_then(|s| s.build()).map_err(err)?;
        rows.extend(obstruction_rows(&dom, j, &alphas, true).map_err(err)?);
    }
    for r in &rows {
        let g = r.grid.unwrap_or(f64::NAN);
        let f = [spread(r.upper, g), spread(r.upper, r.l_sum()), spread(g, r.l_sum())];
        let worst = f.iter().cloned().fold(0.0, f64::max);
        let pair_ok = worst <= 8.0;
        let ratio_ok = r.alpha > 0.5 || r.sigma_ratio() >= 1.0 / 32.0;
        ok &= pair_ok && ratio_ok;
        parts.push(format!(
            "j={} alpha={}: factors upper/grid {:.2}, upper/L {:.2}, grid/L {:.2}{}, sigma/d {:.4}{}",
            r.j,
            r.alpha,
            f[0],
            f[1],
            f[2],
            if pair_ok { "" } else { " (>8)" },
            r.sigma_ratio(),
            if ratio_ok { "" } else { " (<1/32)" }
        ));
    }
    let at = |j| rows.iter().find(|r| r.j == j && r.alpha == 0.75).map(|r| r.sigma_ratio()).unwrap_or(f64::NAN);
    let per_j = at(2) / at(3);
    let slope_ok = (2f64.powf(0.15)..=2f64.powf(0.35)).contains(&per_j);
    ok &= slope_ok;
    parts.push(format!("alpha=0.75 decrease per j {per_j:.4} = 2^{:.3}", per_j.log2()));
    let t = toy_exhaustion(&ToyInstance::default()).map_err(err)?;
    let toy_ok = t.nodes <= 200 && t.exhausted && !t.passing;
    ok &= toy_ok;
    parts.push(format!("toy: {} nodes, best sigma {:.2} vs d {:.2}, passing dataset {}", t.nodes, t.best_sigma, t.d_alpha, if t.passing { "found" } else { "none" }));
    check(ok, parts.join("; "))
}

fn alpha_sets() -> Outcome {
    let err = |e: wslice_core::Error| e.to_string();
    let mut ok = true;
    let mut parts = Vec::new();
    let probes = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
    for spec in [
        DecoratedSquareSpec::thm43(0.5, 3.0, 6.0, &[2, 3]).map_err(err)?,
        DecoratedSquareSpec::ex44(0.5, 3.0, 6.0, &[2, 3]).map_err(err)?,
        DecoratedSquareSpec::ex46(0.3, 0.7, 3.0, 6.0, &[2, 3]).map_err(err)?,
    ] {
        let got = predicted_alpha_set(&spec);
        let want = expected_alpha_set(&spec).ok_or("family has no designed set")?;
        let a0 = spec.alpha0.unwrap_or(0.0);
        let a1 = spec.alpha1.unwrap_or(a0);
        let edges = [a0, a1, a0 - 1e-6, a0 + 1e-6, a1 - 1e-6, a1 + 1e-6];
        let edges_ok = edges.iter().all(|&a| got.contains(a) == want.contains(a));
        let rep = alpha_set_probe(&spec, &probes, &[2, 3], None).map_err(err)?;
        ok &= got == want && edges_ok && rep.passed();
        parts.push(format!("{:?}: {got}", spec.family));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = 0;
    for _ in 0..5 {
        let (a, b) = (rng.gen_range(0.1..0.45), rng.gen_range(0.55..0.9));
        let alphas: Vec<f64> = (0..40).map(|_| rng.gen_range(0.0..1.0)).chain([0.0, a, b]).collect();
        let u = [DecoratedSquareSpec::thm43(a, 3.0, 6.0, &[2, 3]).map_err(err)?, DecoratedSquareSpec::ex44(b, 3.0, 6.0, &[2, 3]).map_err(err)?];
        let i = [DecoratedSquareSpec::thm43(b, 3.0, 6.0, &[2, 4]).map_err(err)?, DecoratedSquareSpec::ex44(a, 3.0, 6.0, &[2, 4]).map_err(err)?];
        for (mode, s) in [(CombineMode::Union, &u), (CombineMode::Intersection, &i)] {
            let c = combine_specs(mode, s).map_err(err)?;
            mismatches += probe_algebra(mode, s, &c, &alphas).iter().filter(|(_, got, want)| got != want).count();
        }
    }
    ok &= mismatches == 0;
    parts.push(format!("union and intersection on 5 seeded pairs: {mismatches} mismatches"));
    check(ok, parts.join("; "))
}

fn run_cases<S: Strategy>(name: &str, strategy: S, case: impl Fn(S::Value) -> common::CaseResult) -> Result<String, String>
where
    S::Value: Debug,
{
    let config = Config { cases: 100, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, case).map(|_| format!("{name} 100/100")).map_err(|e| format!("{name}: {e}"))
}

fn property_suites() -> Outcome {
    let u = || 0.0..1.0f64;
    let results = [
        run_cases("symmetry", (u(), u(), u()), common::symmetric),
        run_cases("triangle", (u(), u(), u(), u()), common::triangle),
        run_cases("alpha monotonicity", (u(), u(), u(), u()), common::nonincreasing_in_alpha),
        run_cases("monotone in C", (common::strips(), 0.0..0.9f64, 1.0..64.0f64, 1.0..64.0f64), common::monotone_in_c),
        run_cases("dilation", (common::strips(), -3i32..4, 0.0..0.9f64, 1.0..64.0f64), common::dilation),
        run_cases("WS-1 brute force", common::crossing_case(), common::crossing_matches_brute_force),
        run_cases("boundary distance", (common::any_spec(), u(), u()), common::delta_matches_brute_force),
        run_cases("mirror symmetry", (common::any_spec(), u(), -1.0..1.0f64), common::mirror_symmetric),
        run_cases("domain file", common::any_spec(), common::domain_fixed_point),
        run_cases("dataset file", common::dataset_case(), common::dataset_fixed_point),
    ];
    let ok = results.iter().all(|r| r.is_ok());
    let text: Vec<String> = results.into_iter().map(|r| r.unwrap_or_else(|e| e)).collect();
    check(ok, text.join(", "))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 7] = [
        ("scaling identity", Duration::from_secs(1), scaling_identity),
        ("metric oracles", Duration::from_secs(30), metric_oracles),
        ("corridor example, positive direction", Duration::from_secs(600), ex32_positive),
        ("corridor example, slice failure", Duration::from_secs(300), ex32_negative),
        ("obstruction at desk scale", Duration::from_secs(900), thm43_obstruction),
        ("alpha-set probes", Duration::from_secs(10), alpha_sets),
        ("property suites", Duration::from_secs(600), property_suites),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let took = t.elapsed();
        let in_time = took <= budget;
        let pass = out.is_ok() && in_time;
        failed += usize::from(!pass);
        let detail = out.unwrap_or_else(|e| e);
        println!(
            "{} {} {name}: {detail} [{:.2} s, budget {} s{}]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            took.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
    }
    println!("acceptance: {} of 7 criteria pass", 7 - failed);
    if failed > 0 && std::env::var_os("WSLICE_ACCEPTANCE_STRICT").is_some_and(|v| v == "1") {
        std::process::exit(1);
    }
}
