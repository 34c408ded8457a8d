use serde::{Deserialize, Serialize};
use serde_json::json;

use super::report::ExperimentReport;
use crate::error::Result;
use crate::geometry::{PlanarDomain, Point2, Rect};
use crate::metrics::crossing::CrossingOracle;
use crate::metrics::grid::{build_grid, GridGraph};
use crate::metrics::paths::{d_alpha, snap_pair};
use crate::report::Verdict;
use crate::slices::region::{clipped_diameter, slices_overlap};

/// Annulus-like toy: a rectangle with a rectangular hole, points on opposite sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToyInstance {
    pub outer: Rect,
    pub hole: Rect,
    pub h: f64,
    pub x: Point2,
    pub y: Point2,
    #[serde(rename = "C")]
    pub c: f64,
    pub alpha: f64,
}

impl Default for ToyInstance {
    fn default() -> Self {
        ToyInstance {
            outer: Rect::new(0.0, 0.0, 24.0, 8.0),
            hole: Rect::new(2.0, 2.0, 22.0, 6.0),
            h: 1.0,
            x: Point2::new(1.0, 4.0),
            y: Point2::new(23.0, 4.0),
            c: 1.0,
            alpha: 0.75,
        }
    }
}

impl ToyInstance {
    pub fn domain(&self) -> Result<PlanarDomain> {
        PlanarDomain::new(vec![self.outer.to_polygon()], vec![self.hole.to_polygon()], vec![])
    }

    pub fn grid(&self, domain: &PlanarDomain) -> Result<GridGraph> {
        build_grid(domain, self.outer, self.h)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub rect: Rect,
    pub d_s: f64,
    pub crossing: f64,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToyOutcome {
    pub nodes: usize,
    pub candidates: usize,
    pub admissible: Vec<Candidate>,
    pub d_alpha: f64,
    /// Largest `δ^α(x) + δ^α(y) + Σ d_S^α` over pairwise disjoint admissible families.
    pub best_sigma: f64,
    pub best_family: Vec<usize>,
    pub search_nodes: u64,
    pub exhausted: bool,
    pub passing: bool,
}

const SEARCH_CAP: u64 = 50_000_000;

/// Every axis-aligned rectangle with corners on the half-integer lattice of the padded bounding box.
pub fn candidate_rects(outer: Rect, h: f64) -> Vec<Rect> {
    let xs: Vec<f64> = (0..).map(|i| outer.min.x - 0.5 * h + i as f64 * h).take_while(|&x| x <= outer.max.x + 0.5 * h + 1e-9).collect();
    let ys: Vec<f64> = (0..).map(|i| outer.min.y - 0.5 * h + i as f64 * h).take_while(|&y| y <= outer.max.y + 0.5 * h + 1e-9).collect();
    let mut out = Vec::new();
    for (a, &x0) in xs.iter().enumerate() {
        for &x1 in &xs[a + 1..] {
            for (b, &y0) in ys.iter().enumerate() {
                for &y1 in &ys[b + 1..] {
                    out.push(Rect::new(x0, y0, x1, y1));
                }
            }
        }
    }
    out
}

struct Search<'a> {
    w: &'a [f64],
    conflict: &'a [Vec<bool>],
    suffix: Vec<f64>,
    best: f64,
    best_set: Vec<usize>,
    cur: Vec<usize>,
    visited: u64,
}

impl Search<'_> {
    fn go(&mut self, i: usize, total: f64) {
        self.visited += 1;
        if total > self.best {
            self.best = total;
            self.best_set = self.cur.clone();
        }
        if i == self.w.len() || self.visited >= SEARCH_CAP || total + self.suffix[i] <= self.best {
            return;
        }
        if self.cur.iter().all(|&k| !self.conflict[i][k]) {
            self.cur.push(i);
            self.go(i + 1, total + self.w[i]);
            self.cur.pop();
        }
        self.go(i + 1, total);
    }
}

/// Exhausts the rectangle datasets of a toy instance under WS-1 and WS-2, then compares the best sum with `d_α`.
pub fn toy_exhaustion(t: &ToyInstance) -> Result<ToyOutcome> {
    let domain = t.domain()?;
    let grid = t.grid(&domain)?;
    let (sx, sy) = snap_pair(&grid, t.x, t.y)?;
    let d = d_alpha(&grid, t.x, t.y, t.alpha)?.value;
    let dx = domain.distance_to_boundary(t.x)?;
    let dy = domain.distance_to_boundary(t.y)?;
    let rects = candidate_rects(t.outer, t.h);
    let n_cand = rects.len();
    let mut admissible = Vec::new();
    for r in rects {
        let shape = r.to_polygon();
        // WS-2: clear of both balls, which also keeps the points outside the closure
        let gx = if shape.contains_closed(t.x) { 0.0 } else { shape.boundary_dist(t.x) };
        let gy = if shape.contains_closed(t.y) { 0.0 } else { shape.boundary_dist(t.y) };
        if gx < dx / t.c - 1e-12 || gy < dy / t.c - 1e-12 {
            continue;
        }
        let d_s = clipped_diameter(&domain, &shape);
        if d_s == 0.0 {
            continue;
        }
        let o = CrossingOracle::new(&grid, std::slice::from_ref(&shape));
        // WS-1 needs separation on the grid; the slack covers only the length
        if !o.separates(sx, sy) {
            continue;
        }
        let crossing = o.query(sx, sy);
        if crossing >= d_s / t.c - 2.0 * t.h - 1e-12 {
            admissible.push(Candidate { rect: r, d_s, crossing, weight: d_s.powf(t.alpha) });
        }
    }
    admissible.sort_by(|a, b| b.weight.total_cmp(&a.weight));
    let n = admissible.len();
    let polys: Vec<_> = admissible.iter().map(|c| c.rect.to_polygon()).collect();
    let mut conflict = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..i {
            let c = admissible[i].rect.intersects(&admissible[k].rect) && slices_overlap(&domain, &polys[i], &polys[k]);
            conflict[i][k] = c;
            conflict[k][i] = c;
        }
    }
    let w: Vec<f64> = admissible.iter().map(|c| c.weight).collect();
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + w[i];
    }
    let mut s = Search { w: &w, conflict: &conflict, suffix, best: 0.0, best_set: Vec::new(), cur: Vec::new(), visited: 0 };
    s.go(0, 0.0);
    let base = dx.powf(t.alpha) + dy.powf(t.alpha);
    let best_sigma = base + s.best;
    Ok(ToyOutcome {
        nodes: grid.len(),
        candidates: n_cand,
        admissible,
        d_alpha: d,
        best_sigma,
        best_family: s.best_set,
        search_nodes: s.visited,
        exhausted: s.visited < SEARCH_CAP,
        passing: d <= t.c * best_sigma,
    })
}

pub fn toy_report(t: &ToyInstance) -> Result<ExperimentReport> {
    let out = toy_exhaustion(t)?;
    let mut rep = ExperimentReport::new("toy", serde_json::to_value(t).expect("toy serializes"), None);
    rep.columns = ["x0", "y0", "x1", "y1", "d_S", "crossing", "weight"].iter().map(|s| s.to_string()).collect();
    for c in &out.admissible {
        rep.rows.push(vec![c.rect.min.x, c.rect.min.y, c.rect.max.x, c.rect.max.y, c.d_s, c.crossing, c.weight]);
    }
    rep.checks.push(
        "no_passing_dataset",
        None,
        Verdict::from_bool(out.exhausted && !out.passing),
        true,
        &[("d_alpha", out.d_alpha), ("best_sigma", out.best_sigma), ("candidates", out.candidates as f64), ("admissible", out.admissible.len() as f64), ("nodes", out.nodes as f64)],
    );
    rep.details = json!({ "best_family": out.best_family, "search_nodes": out.search_nodes, "evidence": "exhaustive over rectangle datasets on the toy grid" });
    Ok(rep)
}
