use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::obstruction::obstruction_rows;
use super::report::ExperimentReport;
use super::scaling::log2_exact_l;
use crate::error::{Error, Result};
use crate::geometry::{CorridorDesign, CorridorLaw, DecoratedSquareSpec, Family, Placement, RModifier, Slot};
use crate::report::Verdict;

const EXP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaClass {
    WsliceConsistent,
    Obstructed,
}

/// `(1/j)·log₂(L/L_i)` split into the part linear in `j` and the `log₂ j / j` part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerExponent {
    pub design: usize,
    pub layer: usize,
    pub leading: f64,
    pub log_coefficient: f64,
}

impl LayerExponent {
    /// Whether `L/L_i → ∞` along the sequence.
    pub fn diverges(&self) -> bool {
        self.leading > EXP_TOL || (self.leading.abs() <= EXP_TOL && self.log_coefficient > EXP_TOL)
    }
}

fn exponent(diag: &CorridorLaw, layer: &CorridorLaw, alpha: f64) -> (f64, f64) {
    let lead = |l: &CorridorLaw| -l.length.exponent + (1.0 - alpha) * l.width.exponent;
    let logc = |l: &CorridorLaw| l.length.j_power as f64 - (1.0 - alpha) * l.width.j_power as f64;
    (lead(diag) - lead(layer), logc(diag) - logc(layer))
}

pub fn layer_exponents(spec: &DecoratedSquareSpec, alpha: f64) -> Vec<LayerExponent> {
    let mut out = Vec::new();
    for (di, d) in spec.designs.iter().enumerate() {
        for (li, l) in d.layers.iter().enumerate() {
            let (leading, log_coefficient) = exponent(&d.diagonal, l, alpha);
            out.push(LayerExponent { design: di, layer: li, leading, log_coefficient });
        }
    }
    out
}

/// A design is obstructed when its diagonal term outgrows every horizontal layer.
pub fn classify(spec: &DecoratedSquareSpec, alpha: f64) -> AlphaClass {
    let ex = layer_exponents(spec, alpha);
    let obstructed = (0..spec.designs.len()).any(|d| {
        let mut mine = ex.iter().filter(|e| e.design == d).peekable();
        mine.peek().is_some() && mine.all(LayerExponent::diverges)
    });
    if obstructed {
        AlphaClass::Obstructed
    } else {
        AlphaClass::WsliceConsistent
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl AlphaInterval {
    /// Endpoints are compared with the classification tolerance, matching the rounded breakpoints.
    pub fn contains(&self, a: f64) -> bool {
        let above = if self.lo_closed { a >= self.lo - EXP_TOL } else { a > self.lo + EXP_TOL };
        let below = if self.hi_closed { a <= self.hi + EXP_TOL } else { a < self.hi - EXP_TOL };
        above && below
    }
}

/// Finite union of intervals in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaSet {
    pub intervals: Vec<AlphaInterval>,
}

impl AlphaSet {
    pub fn contains(&self, a: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(a))
    }
}

impl fmt::Display for AlphaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|i| {
                if i.lo == i.hi {
                    format!("{{{}}}", i.lo)
                } else {
                    format!("{}{}, {}{}", if i.lo_closed { '[' } else { '(' }, i.lo, i.hi, if i.hi_closed { ']' } else { ')' })
                }
            })
            .collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

/// Exponents where some layer exponent changes sign, rounded to twelve decimals.
pub fn breakpoints(spec: &DecoratedSquareSpec) -> Vec<f64> {
    let mut out = Vec::new();
    for d in &spec.designs {
        for l in &d.layers {
            let (e0, _) = exponent(&d.diagonal, l, 0.0);
            let (e1, _) = exponent(&d.diagonal, l, 1.0);
            // linear in α: e(α) = e0 + (e1 − e0)·α
            if (e1 - e0).abs() > EXP_TOL {
                let a = (-e0 / (e1 - e0) * 1e12).round() / 1e12;
                if a > 0.0 && a < 1.0 {
                    out.push(a);
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// The predicted α-set, from the classification at each breakpoint and between them.
pub fn predicted_alpha_set(spec: &DecoratedSquareSpec) -> AlphaSet {
    let bps = breakpoints(spec);
    let mut pieces: Vec<AlphaInterval> = vec![AlphaInterval { lo: 0.0, hi: 0.0, lo_closed: true, hi_closed: true }];
    let mut prev = 0.0;
    for &b in &bps {
        pieces.push(AlphaInterval { lo: prev, hi: b, lo_closed: false, hi_closed: false });
        pieces.push(AlphaInterval { lo: b, hi: b, lo_closed: true, hi_closed: true });
        prev = b;
    }
    pieces.push(AlphaInterval { lo: prev, hi: 1.0, lo_closed: false, hi_closed: false });
    let mut out: Vec<AlphaInterval> = Vec::new();
    for p in pieces {
        let sample = if p.lo == p.hi { p.lo } else { 0.5 * (p.lo + p.hi) };
        if classify(spec, sample) != AlphaClass::WsliceConsistent {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.hi == p.lo && (last.hi_closed || p.lo_closed) => {
                last.hi = p.hi;
                last.hi_closed = p.hi_closed;
            }
            _ => out.push(p),
        }
    }
    AlphaSet { intervals: out }
}

/// The set the construction is designed to have, when the family fixes one.
pub fn expected_alpha_set(spec: &DecoratedSquareSpec) -> Option<AlphaSet> {
    let iv = |lo, hi, lo_closed, hi_closed| AlphaInterval { lo, hi, lo_closed, hi_closed };
    match spec.family {
        Family::Ex32 => Some(AlphaSet { intervals: vec![iv(0.0, 1.0, true, false)] }),
        Family::Thm43ThinShort => Some(AlphaSet { intervals: vec![iv(0.0, spec.alpha0?, true, true)] }),
        Family::Thm43FatLong => Some(AlphaSet { intervals: vec![iv(spec.alpha0?, 1.0, true, false)] }),
        Family::Ex46 => Some(AlphaSet { intervals: vec![iv(0.0, spec.alpha0?, true, true), iv(spec.alpha1?, 1.0, true, false)] }),
        Family::Ex45 | Family::Corridor => None,
    }
}

/// The spec reduced to the decorations with the given index.
fn single_index(spec: &DecoratedSquareSpec, j: u32) -> Result<DecoratedSquareSpec> {
    let mut s = spec.clone();
    s.sequence.retain(|sl| sl.j == j);
    if s.sequence.is_empty() {
        return Err(Error::SpecInvalid(format!("no decoration with index {j}")));
    }
    if let Placement::Explicit(_) = s.placement {
        s.placement = Placement::Stacked;
    }
    Ok(s)
}

pub fn alpha_set_probe(spec: &DecoratedSquareSpec, alphas: &[f64], js: &[u32], grid_j_max: Option<u32>) -> Result<ExperimentReport> {
    spec.decoration_specs()?;
    if let Some(q) = &spec.quadruple {
        q.check()?;
    }
    if let Some(a) = alphas.iter().find(|a| !(0.0..1.0).contains(*a)) {
        return Err(Error::SpecInvalid(format!("alpha = {a} outside [0,1)")));
    }
    let params = json!({ "spec": spec, "alphas": alphas, "js": js, "grid_j_max": grid_j_max });
    let mut rep = ExperimentReport::new("alpha-set", params, None);
    rep.columns = ["alpha", "obstructed", "max_leading_exponent", "min_leading_exponent"].iter().map(|s| s.to_string()).collect();
    let mut per_alpha = Vec::new();
    for &a in alphas {
        let ex = layer_exponents(spec, a);
        let class = classify(spec, a);
        let lead_max = ex.iter().map(|e| e.leading).fold(f64::NEG_INFINITY, f64::max);
        let lead_min = ex.iter().map(|e| e.leading).fold(f64::INFINITY, f64::min);
        rep.rows.push(vec![a, (class == AlphaClass::Obstructed) as u8 as f64, lead_max, lead_min]);
        per_alpha.push(json!({ "alpha": a, "class": class, "exponents": ex }));
    }
    let predicted = predicted_alpha_set(spec);
    if let Some(expected) = expected_alpha_set(spec) {
        rep.checks.push("alpha_set", Some(format!("predicted {predicted}, expected {expected}")), Verdict::from_bool(predicted == expected), true, &[]);
    } else {
        rep.checks.push("alpha_set", Some(format!("predicted {predicted}")), Verdict::Info, false, &[]);
    }
    let mut numeric = Vec::new();
    if let Some(jmax) = grid_j_max {
        for &j in js.iter().filter(|&&j| j <= jmax) {
            let dom = single_index(spec, j)?.build()?;
            for r in obstruction_rows(&dom, j, alphas, true)? {
                let class = classify(spec, r.alpha);
                rep.checks.push(
                    "numeric_ratio",
                    Some(format!("j={j} alpha={} {:?}", r.alpha, class)),
                    Verdict::Info,
                    false,
                    &[("d_alpha_grid", r.grid.unwrap_or(f64::NAN)), ("sigma_right", r.sigma_right), ("d_over_sigma", 1.0 / r.sigma_ratio())],
                );
                numeric.push(r);
            }
        }
    }
    rep.details = json!({ "predicted_set": predicted.to_string(), "intervals": predicted, "per_alpha": per_alpha, "numeric": numeric,
        "evidence": "exact exponents; numeric rows are single-pair measurements" });
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombineMode {
    Union,
    Intersection,
}

/// Layers of every donor joined into one design (union) or donors interleaved (intersection).
pub fn combine_specs(mode: CombineMode, specs: &[DecoratedSquareSpec]) -> Result<DecoratedSquareSpec> {
    if specs.is_empty() {
        return Err(Error::SpecInvalid("nothing to combine".into()));
    }
    if specs.len() == 1 {
        return Ok(specs[0].clone());
    }
    let mut js: Vec<u32> = specs.iter().flat_map(|s| s.js()).collect();
    js.sort_unstable();
    js.dedup();
    let out = match mode {
        CombineMode::Union => {
            if let Some(s) = specs.iter().find(|s| s.designs.len() != 1) {
                return Err(Error::SpecInvalid(format!("union needs single-design specs, got {} designs", s.designs.len())));
            }
            let diagonal = specs[0].designs[0].diagonal;
            if specs.iter().any(|s| s.designs[0].diagonal != diagonal) {
                return Err(Error::SpecInvalid("union needs a common diagonal law".into()));
            }
            let mut layers: Vec<CorridorLaw> = Vec::new();
            for l in specs.iter().flat_map(|s| s.designs[0].layers.iter()) {
                if !layers.contains(l) {
                    layers.push(*l);
                }
            }
            // innermost is thinnest
            layers.sort_by(|a, b| b.width.exponent.total_cmp(&a.width.exponent));
            if layers.windows(2).any(|w| !(w[0].width.exponent > w[1].width.exponent)) {
                return Err(Error::SpecInvalid("layer widths are not strictly nested".into()));
            }
            DecoratedSquareSpec::corridor(
                vec![CorridorDesign { diagonal, layers }],
                js.iter().map(|&j| Slot { design: 0, j }).collect(),
            )?
        }
        CombineMode::Intersection => {
            let designs: Vec<CorridorDesign> = specs.iter().flat_map(|s| s.designs.iter().cloned()).collect();
            if js.len() < designs.len() {
                return Err(Error::SpecInvalid(format!("{} decoration indices cannot host {} designs", js.len(), designs.len())));
            }
            let n = designs.len();
            let sequence = js.iter().enumerate().map(|(i, &j)| Slot { design: i % n, j }).collect();
            DecoratedSquareSpec::corridor(designs, sequence)?
        }
    };
    out.decoration_specs()?;
    Ok(out)
}

/// Per exponent: whether the combined spec is consistent, and what the donors' classes predict for it.
pub fn probe_algebra(mode: CombineMode, specs: &[DecoratedSquareSpec], combined: &DecoratedSquareSpec, alphas: &[f64]) -> Vec<(f64, bool, bool)> {
    alphas
        .iter()
        .map(|&a| {
            let ok = |s: &DecoratedSquareSpec| classify(s, a) == AlphaClass::WsliceConsistent;
            let want = match mode {
                CombineMode::Union => specs.iter().any(ok),
                CombineMode::Intersection => specs.iter().all(ok),
            };
            (a, ok(combined), want)
        })
        .collect()
}

pub fn run_combine(mode: CombineMode, specs: &[DecoratedSquareSpec], alphas: &[f64]) -> Result<(DecoratedSquareSpec, ExperimentReport)> {
    let combined = combine_specs(mode, specs)?;
    let params = json!({ "mode": mode, "specs": specs, "alphas": alphas });
    let mut rep = ExperimentReport::new("combine", params, None);
    rep.columns = ["alpha", "combined_consistent", "expected_consistent"].iter().map(|s| s.to_string()).collect();
    let rows = probe_algebra(mode, specs, &combined, alphas);
    let mut bad = 0;
    for &(a, got, want) in &rows {
        bad += (got != want) as usize;
        rep.rows.push(vec![a, got as u8 as f64, want as u8 as f64]);
    }
    let sets: Vec<String> = specs.iter().map(|s| predicted_alpha_set(s).to_string()).collect();
    let set = predicted_alpha_set(&combined);
    rep.checks.push("probe_algebra", Some(format!("{mode:?}: {set}")), Verdict::from_bool(bad == 0), true, &[("mismatches", bad as f64), ("alphas", rows.len() as f64)]);
    rep.details = json!({ "combined": combined, "combined_set": set.to_string(), "donor_sets": sets });
    Ok((combined, rep))
}

/// Both orientations of `log₂` of the ratio at `α = α₀`, for both width modifiers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ex45Trajectory {
    pub j: u32,
    pub times_j_l_over_lp: f64,
    pub times_j_lp_over_l: f64,
    pub div_j_l_over_lp: f64,
    pub div_j_lp_over_l: f64,
}

pub fn ex45_trajectories(alpha0: f64, p: f64, q: f64, js: &[u32]) -> Result<Vec<Ex45Trajectory>> {
    DecoratedSquareSpec::ex45(alpha0, p, q, &[1], RModifier::TimesJ)?;
    let (pp, qp) = (p + 1.0 - alpha0, q + 1.0);
    Ok(js
        .iter()
        .map(|&j| {
            let lp = log2_exact_l(j, alpha0, pp, qp, RModifier::None);
            let t = log2_exact_l(j, alpha0, p, q, RModifier::TimesJ) - lp;
            let d = log2_exact_l(j, alpha0, p, q, RModifier::DivJ) - lp;
            Ex45Trajectory { j, times_j_l_over_lp: t, times_j_lp_over_l: -t, div_j_l_over_lp: d, div_j_lp_over_l: -d }
        })
        .collect())
}

/// Both width modifiers side by side: trajectories of both ratio orientations and the two predicted sets.
pub fn run_ex45(alpha0: f64, p: f64, q: f64, js: &[u32], alphas: &[f64]) -> Result<ExperimentReport> {
    let traj = ex45_trajectories(alpha0, p, q, js)?;
    let params = json!({ "alpha0": alpha0, "p": p, "q": q, "js": js, "alphas": alphas });
    let mut rep = ExperimentReport::new("ex45", params, None);
    rep.columns = ["j", "times_j_l_over_lp", "times_j_lp_over_l", "div_j_l_over_lp", "div_j_lp_over_l"].iter().map(|s| s.to_string()).collect();
    for t in &traj {
        rep.rows.push(vec![t.j as f64, t.times_j_l_over_lp, t.times_j_lp_over_l, t.div_j_l_over_lp, t.div_j_lp_over_l]);
    }
    let mut sets = serde_json::Map::new();
    for (name, m) in [("times_j", RModifier::TimesJ), ("div_j", RModifier::DivJ)] {
        let spec = DecoratedSquareSpec::ex45(alpha0, p, q, &[1], m)?;
        let set = predicted_alpha_set(&spec);
        rep.checks.push("alpha_set", Some(format!("{name}: {set}")), Verdict::Info, false, &[("contains_alpha0", set.contains(alpha0) as u8 as f64)]);
        let classes: Vec<_> = alphas.iter().map(|&a| json!({ "alpha": a, "class": classify(&spec, a) })).collect();
        sets.insert(name.to_string(), json!({ "set": set.to_string(), "classes": classes }));
    }
    rep.details = json!({ "trajectories": traj, "modifiers": sets });
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sets() {
        let t = DecoratedSquareSpec::thm43(0.5, 3.0, 6.0, &[2]).unwrap();
        assert_eq!(predicted_alpha_set(&t).to_string(), "[0, 0.5]");
        let e = DecoratedSquareSpec::ex44(0.5, 3.0, 6.0, &[2]).unwrap();
        assert_eq!(predicted_alpha_set(&e).to_string(), "[0.5, 1)");
        let s = DecoratedSquareSpec::ex46(0.3, 0.7, 3.0, 6.0, &[2]).unwrap();
        assert_eq!(predicted_alpha_set(&s).to_string(), "[0, 0.3] ∪ [0.7, 1)");
        let x = DecoratedSquareSpec::ex32(&[2]).unwrap();
        assert_eq!(predicted_alpha_set(&x).to_string(), "[0, 1)");
    }

    #[test]
    fn modifiers_move_the_endpoint() {
        let t = DecoratedSquareSpec::ex45(0.5, 3.0, 6.0, &[2], RModifier::TimesJ).unwrap();
        assert_eq!(predicted_alpha_set(&t).to_string(), "[0, 0.5]");
        let d = DecoratedSquareSpec::ex45(0.5, 3.0, 6.0, &[2], RModifier::DivJ).unwrap();
        assert_eq!(predicted_alpha_set(&d).to_string(), "[0, 0.5)");
    }

    #[test]
    fn union_rebuilds_the_two_layer_example() {
        let a = DecoratedSquareSpec::thm43(0.3, 3.0, 6.0, &[2, 3]).unwrap();
        let b = DecoratedSquareSpec::ex44(0.7, 3.0, 6.0, &[2, 3]).unwrap();
        let u = combine_specs(CombineMode::Union, &[a.clone(), b]).unwrap();
        let e = DecoratedSquareSpec::ex46(0.3, 0.7, 3.0, 6.0, &[2, 3]).unwrap();
        assert_eq!(u.designs, e.designs);
        let c = DecoratedSquareSpec::thm43(0.7, 3.0, 6.0, &[2, 3]).unwrap();
        assert!(matches!(combine_specs(CombineMode::Union, &[a, c]), Err(Error::SpecInvalid(_))));
    }
}
