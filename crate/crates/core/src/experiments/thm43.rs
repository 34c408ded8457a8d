use serde::{Deserialize, Serialize};
use serde_json::json;

use super::alpha_set::{classify, predicted_alpha_set, AlphaClass};
use super::obstruction::{obstruction_rows, ObstructionRow};
use super::report::ExperimentReport;
use super::toy::{toy_exhaustion, ToyInstance};
use crate::error::Result;
use crate::geometry::DecoratedSquareSpec;
use crate::report::Verdict;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionOptions {
    pub alpha0: f64,
    pub p: f64,
    pub q: f64,
    pub js: Vec<u32>,
    pub alphas: Vec<f64>,
    pub toy: bool,
}

impl Default for ObstructionOptions {
    fn default() -> Self {
        ObstructionOptions { alpha0: 0.5, p: 3.0, q: 6.0, js: vec![2, 3], alphas: vec![0.25, 0.5, 0.75], toy: true }
    }
}

/// `max(a, b) / min(a, b)`.
pub fn spread(a: f64, b: f64) -> f64 {
    a.max(b) / a.min(b)
}

/// Measurements at the obstruction pair of the thin, short construction.
pub fn run_thm43(opts: &ObstructionOptions) -> Result<ExperimentReport> {
    let spec = DecoratedSquareSpec::thm43(opts.alpha0, opts.p, opts.q, &opts.js)?;
    let params = serde_json::to_value(opts).expect("options serialize");
    let mut rep = ExperimentReport::new("thm43", params, None);
    rep.columns = ["j", "alpha", "L", "L_prime", "upper", "grid", "lower", "sigma_right", "census", "sigma_over_d"].iter().map(|s| s.to_string()).collect();
    let mut rows: Vec<ObstructionRow> = Vec::new();
    for &j in &opts.js {
        let dom = DecoratedSquareSpec::thm43(opts.alpha0, opts.p, opts.q, &[j])?.build()?;
        rows.extend(obstruction_rows(&dom, j, &opts.alphas, true)?);
    }
    for r in &rows {
        let (g, lo) = (r.grid.unwrap_or(f64::NAN), r.lower.unwrap_or(f64::NAN));
        let subj = || Some(format!("j={} alpha={}", r.j, r.alpha));
        rep.rows.push(vec![r.j as f64, r.alpha, r.l, r.l_prime, r.upper, g, lo, r.sigma_right, r.census, r.sigma_ratio()]);
        rep.checks.push("bracketing", subj(), Verdict::from_bool(r.upper >= g && g >= lo), true, &[("upper", r.upper), ("grid", g), ("lower", lo)]);
        let ls = r.l_sum();
        for (name, a, b) in [("upper_vs_grid", r.upper, g), ("upper_vs_L", r.upper, ls), ("grid_vs_L", g, ls), ("lower_vs_L", lo, ls)] {
            let s = spread(a, b);
            rep.checks.push(name, subj(), Verdict::from_bool(s <= 8.0), true, &[("factor", s), ("limit", 8.0)]);
        }
        let s = spread(r.sigma_right, r.l_prime);
        rep.checks.push("sigma_vs_L_prime", subj(), Verdict::from_bool(s <= 8.0), true, &[("factor", s), ("sigma_right", r.sigma_right), ("L_prime", r.l_prime)]);
        rep.checks.push("sigma_over_d", subj(), Verdict::Info, false, &[("ratio", r.sigma_ratio())]);
    }
    for &a in &opts.alphas {
        let at: Vec<&ObstructionRow> = rows.iter().filter(|r| r.alpha == a).collect();
        for w in at.windows(2) {
            let per_j = (w[0].sigma_ratio() / w[1].sigma_ratio()).log2() / (w[1].j - w[0].j) as f64;
            rep.checks.push(
                "ratio_slope",
                Some(format!("alpha={a} j={}..{}", w[0].j, w[1].j)),
                Verdict::Info,
                false,
                &[("log2_decrease_per_j", per_j), ("predicted", a - opts.alpha0)],
            );
        }
        let class = classify(&spec, a);
        rep.checks.push(
            "exponent_class",
            Some(format!("alpha={a} {class:?}")),
            Verdict::from_bool((class == AlphaClass::Obstructed) == (a > opts.alpha0)),
            true,
            &[("alpha_minus_alpha0", a - opts.alpha0)],
        );
    }
    let toy = if opts.toy {
        let t = toy_exhaustion(&ToyInstance::default())?;
        rep.checks.push(
            "toy_exhaustion",
            None,
            Verdict::from_bool(t.exhausted && !t.passing),
            true,
            &[("d_alpha", t.d_alpha), ("best_sigma", t.best_sigma), ("admissible", t.admissible.len() as f64)],
        );
        Some(json!({ "nodes": t.nodes, "candidates": t.candidates, "admissible": t.admissible.len(), "d_alpha": t.d_alpha, "best_sigma": t.best_sigma }))
    } else {
        None
    };
    rep.details = json!({
        "rows": rows,
        "predicted_set": predicted_alpha_set(&spec).to_string(),
        "toy": toy,
        "evidence": "exact exponents, obstruction-pair measurements and toy rectangle exhaustion; not a proof of nonexistence",
    });
    Ok(rep)
}
