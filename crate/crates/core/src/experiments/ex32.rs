use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::report::ExperimentReport;
use crate::error::{Error, Result};
use crate::geometry::{DecoratedSquareSpec, Decoration, PlanarDomain, Point2, Polyline};
use crate::metrics::crossing::CrossingOracle;
use crate::metrics::grid::{decoration_grid, GridGraph};
use crate::metrics::paths::d_alpha;
use crate::par_map;
use crate::report::Verdict;
use crate::slices::checks::{measure_dataset, measure_plus, DatasetMeasurements, PlusMeasurements, PlusOptions};
use crate::slices::corridor::{admissible_indices, all_corridor_slices, locate, CorridorSlice};
use crate::slices::region::WsliceDataset;
use crate::slices::witness::{slice_failure_witness_on, Witness};

/// Pairs with `k` at most this are trivially fine.
pub const TRIVIAL_K: f64 = 20.0;
pub const C_RANGE: (f64, f64) = (1.0, 64.0);
/// Pairs drawn per requested pair before giving up.
const DRAW_FACTOR: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ex32Options {
    pub js: Vec<u32>,
    #[serde(rename = "C")]
    pub c: f64,
    pub n_pairs: usize,
    pub seed: u64,
    pub perturbed_paths: usize,
    pub via_paths: usize,
}

impl Default for Ex32Options {
    fn default() -> Self {
        Ex32Options { js: vec![2, 3], c: 10.0, n_pairs: 50, seed: 0, perturbed_paths: 50, via_paths: 150 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairOutcome {
    pub j: u32,
    pub x: Point2,
    pub y: Point2,
    pub k: f64,
    pub trivial: bool,
    pub slices: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ws123: Option<DatasetMeasurements>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plus: Option<PlusMeasurements>,
}

impl PairOutcome {
    pub fn passes_123(&self, c: f64) -> bool {
        self.ws123.as_ref().map_or(true, |m| m.passes(c))
    }

    pub fn passes_all(&self, c: f64) -> bool {
        self.passes_123(c) && self.plus.as_ref().map_or(true, |p| p.ws45_all(c))
    }

    pub fn ws1_plus(&self, c: f64) -> bool {
        self.plus.as_ref().map_or(true, |p| p.ws1_plus_all(c))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ex32Summary {
    pub j: u32,
    pub nodes: usize,
    pub drawn: usize,
    pub trivial: usize,
    pub nontrivial: usize,
    pub fraction_at_c: f64,
    /// Smallest `C` passing WS-1 to WS-3 on every pair.
    pub c_ws123: Option<f64>,
    /// Smallest `C` also passing WS-4 and WS-5.
    pub c_all: Option<f64>,
    pub ws1_plus_fraction: f64,
    pub witness: Witness,
}

/// Smallest `C` in `[lo, hi]` satisfying a monotone predicate, to relative precision `1e-9`.
pub fn bisect_c(lo: f64, hi: f64, ok: impl Fn(f64) -> bool) -> Option<f64> {
    if ok(lo) {
        return Some(lo);
    }
    if !ok(hi) {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > 1e-9 * b {
        let m = 0.5 * (a + b);
        if ok(m) {
            b = m;
        } else {
            a = m;
        }
    }
    Some(b)
}

/// Uniform point of the decoration's bounding box meeting the sampling floor, by rejection.
fn draw_point(domain: &PlanarDomain, d: &Decoration, grid: &GridGraph, rng: &mut ChaCha8Rng) -> Point2 {
    let bb = d.bbox();
    loop {
        let p = Point2::new(rng.gen_range(bb.min.x..bb.max.x), rng.gen_range(bb.min.y..bb.max.y));
        if domain.contains(p) && locate(domain, d, p).is_ok() && grid.snap(p).is_ok() {
            return p;
        }
    }
}

/// Grid geodesic with the exact endpoints attached.
fn efficient_path(domain: &PlanarDomain, est: &Polyline, x: Point2, y: Point2) -> Result<Polyline> {
    let mut v = est.vertices().to_vec();
    if v[0] != x && !domain.segment_hits_boundary(x, v[0]) {
        v.insert(0, x);
    }
    let last = *v.last().unwrap();
    if last != y && !domain.segment_hits_boundary(last, y) {
        v.push(y);
    }
    Polyline::from_path(v)
}

struct Cell<'a> {
    domain: &'a PlanarDomain,
    d: &'a Decoration,
    grid: &'a GridGraph,
    slices: &'a [CorridorSlice],
    oracles: &'a [CrossingOracle<'a>],
}

impl Cell<'_> {
    fn evaluate(&self, x: Point2, y: Point2, c: f64, plus: &PlusOptions) -> Result<PairOutcome> {
        let est = d_alpha(self.grid, x, y, 0.0)?;
        let mut out = PairOutcome { j: self.d.j(), x, y, k: est.value, trivial: est.value <= TRIVIAL_K, slices: 0, ws123: None, plus: None };
        if out.trivial {
            return Ok(out);
        }
        let idx = admissible_indices(self.domain, self.d, self.slices, x, y)?;
        let ds = WsliceDataset::new(x, y, c, 0.0, idx.iter().map(|&i| self.slices[i].region.clone()).collect())?;
        let refs: Vec<&CrossingOracle> = idx.iter().map(|&i| &self.oracles[i]).collect();
        out.slices = idx.len();
        out.ws123 = Some(measure_dataset(self.domain, self.grid, &ds, est.value, Some(&refs))?);
        let path = efficient_path(self.domain, &est.polyline, x, y)?;
        out.plus = Some(measure_plus(self.domain, self.grid, &ds, &path, plus)?);
        Ok(out)
    }
}

/// Pair sweep, constants and witness for one decoration.
pub fn example32_cell(domain: &PlanarDomain, j: u32, opts: &Ex32Options) -> Result<(Ex32Summary, Vec<PairOutcome>)> {
    let d = domain.decoration(j)?;
    let grid = decoration_grid(domain, j)?;
    let slices = all_corridor_slices(d)?;
    let oracles: Vec<CrossingOracle> = par_map(&slices, |s| CrossingOracle::new(&grid, std::slice::from_ref(&s.region.shape)));
    let cell = Cell { domain, d, grid: &grid, slices: &slices, oracles: &oracles };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(j as u64);
    let mut outcomes = Vec::new();
    let mut nontrivial = 0;
    let mut drawn = 0;
    while nontrivial < opts.n_pairs && drawn < DRAW_FACTOR * opts.n_pairs {
        // draw a batch so the evaluations can run side by side
        let want = (opts.n_pairs - nontrivial).max(1);
        let batch: Vec<(usize, Point2, Point2)> = (0..want)
            .map(|i| {
                let x = draw_point(domain, d, &grid, &mut rng);
                let y = draw_point(domain, d, &grid, &mut rng);
                (drawn + i, x, y)
            })
            .collect();
        drawn += batch.len();
        let results = par_map(&batch, |&(i, x, y)| {
            let plus = PlusOptions {
                perturbed: opts.perturbed_paths,
                via: opts.via_paths,
                seed: opts.seed ^ ((j as u64) << 32 | i as u64),
                ..PlusOptions::default()
            };
            cell.evaluate(x, y, opts.c, &plus)
        });
        for r in results {
            let r = r?;
            if !r.trivial {
                if nontrivial == opts.n_pairs {
                    continue;
                }
                nontrivial += 1;
            }
            outcomes.push(r);
        }
    }
    let hard: Vec<&PairOutcome> = outcomes.iter().filter(|o| !o.trivial).collect();
    let c_ws123 = bisect_c(C_RANGE.0, C_RANGE.1, |c| hard.iter().all(|o| o.passes_123(c)));
    let c_all = bisect_c(C_RANGE.0, C_RANGE.1, |c| hard.iter().all(|o| o.passes_all(c)));
    let frac = |f: &dyn Fn(&PairOutcome) -> bool| if hard.is_empty() { 1.0 } else { hard.iter().filter(|o| f(o)).count() as f64 / hard.len() as f64 };
    let fraction_at_c = frac(&|o| o.passes_123(opts.c));
    let c_plus = c_all.unwrap_or(C_RANGE.1);
    let ws1_plus_fraction = frac(&|o| o.ws1_plus(c_plus));
    let witness = slice_failure_witness_on(domain, &grid, j, opts.c)?;
    let summary = Ex32Summary {
        j,
        nodes: grid.len(),
        drawn,
        trivial: outcomes.len() - hard.len(),
        nontrivial: hard.len(),
        fraction_at_c,
        c_ws123,
        c_all,
        ws1_plus_fraction,
        witness,
    };
    Ok((summary, outcomes))
}

pub fn run_example32(opts: &Ex32Options) -> Result<ExperimentReport> {
    if !(opts.c >= 1.0) {
        return Err(Error::SpecInvalid(format!("C = {} must be at least 1", opts.c)));
    }
    let domain = DecoratedSquareSpec::ex32(&opts.js)?.build()?;
    let params = serde_json::to_value(opts).expect("options serialize");
    let mut rep = ExperimentReport::new("ex32", params, Some(opts.seed));
    rep.columns = ["j", "pair", "x1", "x2", "y1", "y2", "k", "trivial", "slices", "sigma", "c_ws123", "c_all"].iter().map(|s| s.to_string()).collect();
    let mut summaries = Vec::new();
    for &j in &opts.js {
        let (s, outcomes) = example32_cell(&domain, j, opts)?;
        for (i, o) in outcomes.iter().enumerate() {
            let (sigma, c123, call) = match &o.ws123 {
                Some(m) => (
                    m.sigma,
                    bisect_c(C_RANGE.0, C_RANGE.1, |c| m.passes(c)).unwrap_or(f64::INFINITY),
                    bisect_c(C_RANGE.0, C_RANGE.1, |c| o.passes_all(c)).unwrap_or(f64::INFINITY),
                ),
                None => (f64::NAN, 1.0, 1.0),
            };
            rep.rows.push(vec![j as f64, i as f64, o.x.x, o.x.y, o.y.x, o.y.y, o.k, o.trivial as u8 as f64, o.slices as f64, sigma, c123, call]);
        }
        let subj = Some(format!("j={j}"));
        rep.checks.push("pairs_at_C", subj.clone(), Verdict::Info, false, &[("fraction", s.fraction_at_c), ("C", opts.c), ("nontrivial", s.nontrivial as f64), ("trivial", s.trivial as f64)]);
        rep.checks.push(
            "uniform_constant",
            subj.clone(),
            Verdict::from_bool(s.c_all.is_some()),
            true,
            &[("C_ws123", s.c_ws123.unwrap_or(f64::INFINITY)), ("C_all", s.c_all.unwrap_or(f64::INFINITY)), ("C_max", C_RANGE.1)],
        );
        rep.checks.push("WS-1+", subj.clone(), Verdict::approx(s.ws1_plus_fraction >= 0.95), false, &[("fraction", s.ws1_plus_fraction)]);
        rep.checks.push(
            "witness",
            subj,
            Verdict::from_bool(s.witness.report.overall),
            true,
            &[
                ("impossible", (s.witness.verdict == crate::slices::witness::WitnessVerdict::Impossible) as u8 as f64),
                ("delta_u", s.witness.delta_u),
                ("k_uy", s.witness.k_uy),
            ],
        );
        summaries.push(s);
    }
    rep.details = json!({ "summaries": summaries, "evidence": "sampled pairs; WS-1+ on sampled paths" });
    Ok(rep)
}
