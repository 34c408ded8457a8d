use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::region::WsliceDataset;
use crate::error::{Error, Result};
use crate::geometry::{PlanarDomain, Point2, Polygon, Polyline};
use crate::metrics::crossing::CrossingOracle;
use crate::metrics::grid::GridGraph;
use crate::metrics::paths::{alpha_field, d_alpha, dijkstra, edge_weight, node_factors, snap_pair};
use crate::metrics::quadrature::{len_alpha_in_polygon, len_alpha_polyline, validate_path, DEFAULT_TOL};
use crate::par_map;
use crate::report::{CheckReport, Verdict};

const EPS: f64 = 1e-12;

/// Everything WS-1 to WS-3 need, measured once and judged at any `C`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceMeasure {
    pub label: String,
    pub d_s: f64,
    /// Minimum in-slice length over grid paths.
    pub crossing: f64,
    /// Local grid spacing used for the slack.
    pub h: f64,
    /// Euclidean distances from `x` and `y` to the slice.
    pub gap_x: f64,
    pub gap_y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeasurements {
    pub alpha: f64,
    pub delta_x: f64,
    pub delta_y: f64,
    pub d_alpha: f64,
    pub sigma: f64,
    pub slices: Vec<SliceMeasure>,
}

impl DatasetMeasurements {
    pub fn ws1_ok(&self, i: usize, c: f64) -> bool {
        let s = &self.slices[i];
        s.crossing >= s.d_s / c - 2.0 * s.h - EPS
    }

    pub fn ws2_ok(&self, i: usize, c: f64) -> bool {
        let s = &self.slices[i];
        s.gap_x >= self.delta_x / c - EPS && s.gap_y >= self.delta_y / c - EPS
    }

    pub fn ws3_ok(&self, c: f64) -> bool {
        self.d_alpha <= c * self.sigma * (1.0 + EPS)
    }

    pub fn passes(&self, c: f64) -> bool {
        self.ws3_ok(c) && (0..self.slices.len()).all(|i| self.ws1_ok(i, c) && self.ws2_ok(i, c))
    }

    pub fn report_at(&self, c: f64) -> CheckReport {
        let mut rep = CheckReport::new();
        for (i, s) in self.slices.iter().enumerate() {
            rep.push(
                "WS-1",
                Some(s.label.clone()),
                Verdict::from_bool(self.ws1_ok(i, c)),
                true,
                &[("min_crossing", s.crossing), ("threshold", s.d_s / c - 2.0 * s.h), ("d_S", s.d_s)],
            );
            rep.push(
                "WS-2",
                Some(s.label.clone()),
                Verdict::from_bool(self.ws2_ok(i, c)),
                true,
                &[("gap_x", s.gap_x), ("gap_y", s.gap_y), ("radius_x", self.delta_x / c), ("radius_y", self.delta_y / c)],
            );
        }
        rep.push(
            "WS-3",
            None,
            Verdict::from_bool(self.ws3_ok(c)),
            true,
            &[("d_alpha", self.d_alpha), ("sigma_alpha", self.sigma), ("bound", c * self.sigma)],
        );
        let base = self.delta_x.powf(self.alpha) + self.delta_y.powf(self.alpha) + self.d_alpha;
        rep.push("sigma_upper", None, Verdict::Info, false, &[("sigma_alpha", self.sigma), ("fitted_constant", self.sigma / base)]);
        rep
    }
}

/// `δ^α` with `0^0` read as one.
fn pow_alpha(d: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        d.powf(alpha)
    }
}

pub(crate) fn check_coverage(grid: &GridGraph, ds: &WsliceDataset) -> Result<()> {
    for p in [ds.x, ds.y] {
        if !grid.covers(p) {
            return Err(Error::GridDoesNotCoverDataset(format!("point ({}, {}) lies outside every grid window", p.x, p.y)));
        }
    }
    let hull = grid
        .patches()
        .iter()
        .map(|p| p.window)
        .reduce(|a, b| a.union(&b))
        .ok_or_else(|| Error::GridDoesNotCoverDataset("empty grid".into()))?;
    for s in &ds.slices {
        let Some(part) = s.shape.bbox().intersection(&hull) else {
            return Err(Error::GridDoesNotCoverDataset(format!("slice `{}` lies outside the grid", s.label)));
        };
        if !grid.covers_rect(&part) {
            return Err(Error::GridDoesNotCoverDataset(format!("slice `{}` is only partly covered", s.label)));
        }
    }
    Ok(())
}

fn slice_h(grid: &GridGraph, shape: &Polygon) -> f64 {
    shape.vertices().iter().map(|&v| grid.h_at(v)).fold(0.0, f64::max)
}

fn gap(shape: &Polygon, p: Point2) -> f64 {
    if shape.contains_closed(p) {
        0.0
    } else {
        shape.boundary_dist(p)
    }
}

/// Measures a dataset; `oracles[i]`, when given, must belong to `ds.slices[i]`.
pub fn measure_dataset(
    domain: &PlanarDomain,
    grid: &GridGraph,
    ds: &WsliceDataset,
    d_alpha_estimate: f64,
    oracles: Option<&[&CrossingOracle]>,
) -> Result<DatasetMeasurements> {
    check_coverage(grid, ds)?;
    let delta_x = domain.distance_to_boundary(ds.x)?;
    let delta_y = domain.distance_to_boundary(ds.y)?;
    let (sx, sy) = snap_pair(grid, ds.x, ds.y)?;
    let idx: Vec<usize> = (0..ds.slices.len()).collect();
    let crossings: Vec<f64> = par_map(&idx, |&i| match oracles {
        Some(o) => o[i].query(sx, sy),
        None => CrossingOracle::new(grid, std::slice::from_ref(&ds.slices[i].shape)).query(sx, sy),
    });
    let slices = ds
        .slices
        .iter()
        .zip(crossings)
        .map(|(s, crossing)| SliceMeasure {
            label: s.label.clone(),
            d_s: s.d_s,
            crossing,
            h: slice_h(grid, &s.shape),
            gap_x: gap(&s.shape, ds.x),
            gap_y: gap(&s.shape, ds.y),
        })
        .collect();
    let sigma = pow_alpha(delta_x, ds.alpha) + pow_alpha(delta_y, ds.alpha) + ds.slices.iter().map(|s| pow_alpha(s.d_s, ds.alpha)).sum::<f64>();
    Ok(DatasetMeasurements { alpha: ds.alpha, delta_x, delta_y, d_alpha: d_alpha_estimate, sigma, slices })
}

/// WS-1, WS-2 and WS-3 at the dataset's own `C`.
pub fn evaluate_dataset(domain: &PlanarDomain, grid: &GridGraph, ds: &WsliceDataset, d_alpha_estimate: f64) -> Result<CheckReport> {
    Ok(measure_dataset(domain, grid, ds, d_alpha_estimate, None)?.report_at(ds.c))
}

/// Largest diameter among the connected pieces of a path inside a polygon.
pub fn max_component_diameter(shape: &Polygon, pts: &[Point2]) -> f64 {
    fn diam(v: &[Point2]) -> f64 {
        let mut d2 = 0.0f64;
        for (i, p) in v.iter().enumerate() {
            for q in &v[i + 1..] {
                d2 = d2.max(p.dist2(*q));
            }
        }
        d2.sqrt()
    }
    let bb = shape.bbox();
    let mut best = 0.0f64;
    let mut cur: Vec<Point2> = Vec::new();
    let mut open = false;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let sb = crate::geometry::Rect::new(a.x.min(b.x), a.y.min(b.y), a.x.max(b.x), a.y.max(b.y));
        let iv = if sb.intersects(&bb) { shape.clip_segment(a, b) } else { Vec::new() };
        if iv.is_empty() {
            best = best.max(diam(&cur));
            cur.clear();
            open = false;
            continue;
        }
        for (t0, t1) in iv {
            if !(open && t0 == 0.0) {
                best = best.max(diam(&cur));
                cur.clear();
            }
            cur.push(a.lerp(b, t0));
            cur.push(a.lerp(b, t1));
            open = t1 == 1.0;
            if !open {
                best = best.max(diam(&cur));
                cur.clear();
            }
        }
    }
    best.max(diam(&cur))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlusOptions {
    pub perturbed: usize,
    pub via: usize,
    pub seed: u64,
    /// Enumerate every simple grid path when the grid has at most this many nodes.
    pub exhaustive_nodes: usize,
}

impl Default for PlusOptions {
    fn default() -> Self {
        PlusOptions { perturbed: 50, via: 150, seed: 0, exhaustive_nodes: 40 }
    }
}

/// Simple node paths between two nodes, or `None` past `cap` paths.
pub fn enumerate_simple_paths(grid: &GridGraph, s: u32, t: u32, cap: usize) -> Option<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    let mut on = vec![false; grid.len()];
    let mut path = vec![s];
    on[s as usize] = true;
    let mut stack: Vec<usize> = vec![0];
    while let Some(k) = stack.last_mut() {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            if out.len() > cap {
                return None;
            }
            on[v as usize] = false;
            path.pop();
            stack.pop();
            continue;
        }
        let nb = grid.neighbors(v);
        if *k >= nb.len() {
            on[v as usize] = false;
            path.pop();
            stack.pop();
            continue;
        }
        let u = nb[*k];
        *k += 1;
        if !on[u as usize] {
            on[u as usize] = true;
            path.push(u);
            stack.push(0);
        }
    }
    Some(out)
}

/// Grid paths used to probe WS-1⁺: the optimum, perturbed optima, and routes through random nodes.
pub fn sample_paths(grid: &GridGraph, alpha: f64, s: u32, t: u32, opts: &PlusOptions) -> Vec<Vec<u32>> {
    let f = node_factors(grid, alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let from_s = dijkstra(grid, s, None, |a, b| edge_weight(grid, &f, a, b));
    let from_t = dijkstra(grid, t, None, |a, b| edge_weight(grid, &f, a, b));
    let mut out = vec![from_s.path_to(t)];
    for _ in 0..opts.perturbed {
        let m: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(0.5..1.5)).collect();
        let sp = dijkstra(grid, s, Some(t), |a, b| edge_weight(grid, &f, a, b) * 0.5 * (m[a as usize] + m[b as usize]));
        out.push(sp.path_to(t));
    }
    let comp = grid.component(s);
    let pool: Vec<u32> = (0..grid.len() as u32).filter(|&v| grid.component(v) == comp).collect();
    for _ in 0..opts.via {
        let v = pool[rng.gen_range(0..pool.len())];
        let mut p = from_s.path_to(v);
        let mut back = from_t.path_to(v);
        back.reverse();
        p.extend_from_slice(&back[1..]);
        out.push(p);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlusMeasurements {
    pub alpha: f64,
    pub labels: Vec<String>,
    pub d_s: Vec<f64>,
    pub h: Vec<f64>,
    /// `len_α` of the efficient path inside each slice.
    pub ws4: Vec<f64>,
    /// Largest inscribed radius found at grid nodes.
    pub ws5: Vec<f64>,
    /// Smallest, over probed paths, of the largest in-slice component diameter.
    pub ws1_plus: Vec<f64>,
    pub paths: usize,
    pub exhaustive: bool,
    pub path_len_alpha: f64,
    pub d_alpha: f64,
}

impl PlusMeasurements {
    pub fn ws4_ok(&self, i: usize, c: f64) -> bool {
        self.ws4[i] <= c * pow_alpha(self.d_s[i], self.alpha) * (1.0 + EPS)
    }

    pub fn ws5_ok(&self, i: usize, c: f64) -> bool {
        self.ws5[i] >= self.d_s[i] / c - EPS
    }

    pub fn ws1_plus_ok(&self, i: usize, c: f64) -> bool {
        self.ws1_plus[i] >= self.d_s[i] / c - 2.0 * self.h[i] - EPS
    }

    pub fn report_at(&self, c: f64, c1: f64) -> CheckReport {
        let mut rep = CheckReport::new();
        rep.push(
            "efficiency",
            None,
            Verdict::from_bool(self.path_len_alpha <= (1.0 + c1) * self.d_alpha * (1.0 + EPS)),
            true,
            &[("len_alpha", self.path_len_alpha), ("d_alpha", self.d_alpha), ("bound", (1.0 + c1) * self.d_alpha)],
        );
        for i in 0..self.labels.len() {
            let l = Some(self.labels[i].clone());
            rep.push("WS-4", l.clone(), Verdict::from_bool(self.ws4_ok(i, c)), true, &[("len_alpha_in_slice", self.ws4[i]), ("bound", c * pow_alpha(self.d_s[i], self.alpha))]);
            rep.push("WS-5", l.clone(), Verdict::from_bool(self.ws5_ok(i, c)), true, &[("inscribed_radius", self.ws5[i]), ("needed", self.d_s[i] / c)]);
            let v = if self.exhaustive { Verdict::from_bool(self.ws1_plus_ok(i, c)) } else { Verdict::approx(self.ws1_plus_ok(i, c)) };
            rep.push("WS-1+", l, v, false, &[("min_component_diameter", self.ws1_plus[i]), ("needed", self.d_s[i] / c), ("paths", self.paths as f64)]);
        }
        rep
    }

    pub fn ws1_plus_all(&self, c: f64) -> bool {
        (0..self.labels.len()).all(|i| self.ws1_plus_ok(i, c))
    }

    pub fn ws45_all(&self, c: f64) -> bool {
        (0..self.labels.len()).all(|i| self.ws4_ok(i, c) && self.ws5_ok(i, c))
    }
}

fn inscribed_radius(domain: &PlanarDomain, grid: &GridGraph, shape: &Polygon) -> f64 {
    let bb = shape.bbox();
    let mut best = 0.0f64;
    for n in 0..grid.len() as u32 {
        let p = grid.pos(n);
        if bb.contains(p) && shape.contains_strict(p) {
            best = best.max(shape.boundary_dist(p).min(domain.raw_delta(p)));
        }
    }
    best
}

pub fn measure_plus(
    domain: &PlanarDomain,
    grid: &GridGraph,
    ds: &WsliceDataset,
    efficient_path: &Polyline,
    opts: &PlusOptions,
) -> Result<PlusMeasurements> {
    validate_path(domain, efficient_path)?;
    check_coverage(grid, ds)?;
    let path_len_alpha = len_alpha_polyline(domain, efficient_path, ds.alpha, DEFAULT_TOL)?;
    let est = d_alpha(grid, ds.x, ds.y, ds.alpha)?;
    let (sx, sy) = snap_pair(grid, ds.x, ds.y)?;
    let (node_paths, exhaustive) = if grid.len() <= opts.exhaustive_nodes {
        match enumerate_simple_paths(grid, sx, sy, 2_000_000) {
            Some(p) => (p, true),
            None => (sample_paths(grid, ds.alpha, sx, sy, opts), false),
        }
    } else {
        (sample_paths(grid, ds.alpha, sx, sy, opts), false)
    };
    let mut point_paths: Vec<Vec<Point2>> = node_paths.iter().map(|p| p.iter().map(|&n| grid.pos(n)).collect()).collect();
    point_paths.push(efficient_path.vertices().to_vec());
    let idx: Vec<usize> = (0..ds.slices.len()).collect();
    let per: Vec<(f64, f64, f64)> = par_map(&idx, |&i| {
        let s = &ds.slices[i];
        let w4 = len_alpha_in_polygon(domain, efficient_path, &s.shape, ds.alpha, DEFAULT_TOL);
        let w5 = inscribed_radius(domain, grid, &s.shape);
        let w1 = point_paths.iter().map(|p| max_component_diameter(&s.shape, p)).fold(f64::INFINITY, f64::min);
        (w4, w5, w1)
    });
    Ok(PlusMeasurements {
        alpha: ds.alpha,
        labels: ds.slices.iter().map(|s| s.label.clone()).collect(),
        d_s: ds.slices.iter().map(|s| s.d_s).collect(),
        h: ds.slices.iter().map(|s| slice_h(grid, &s.shape)).collect(),
        ws4: per.iter().map(|p| p.0).collect(),
        ws5: per.iter().map(|p| p.1).collect(),
        ws1_plus: per.iter().map(|p| if p.2.is_finite() { p.2 } else { 0.0 }).collect(),
        paths: point_paths.len(),
        exhaustive,
        path_len_alpha,
        d_alpha: est.value,
    })
}

/// WS-4, WS-5 and the sampled WS-1⁺ check at the dataset's `C`.
pub fn check_wsplus(domain: &PlanarDomain, grid: &GridGraph, ds: &WsliceDataset, efficient_path: &Polyline, c1: f64) -> Result<CheckReport> {
    Ok(measure_plus(domain, grid, ds, efficient_path, &PlusOptions::default())?.report_at(ds.c, c1))
}

/// Slice condition (a) to (d) at constant `c`.
pub fn check_slice_condition(domain: &PlanarDomain, grid: &GridGraph, ds: &WsliceDataset, path: &Polyline, c: f64) -> Result<CheckReport> {
    if ds.alpha != 0.0 {
        return Err(Error::AlphaNotZero(ds.alpha));
    }
    validate_path(domain, path)?;
    let ds = ds.with_c(c);
    let k = d_alpha(grid, ds.x, ds.y, 0.0)?.value;
    let mut rep = measure_dataset(domain, grid, &ds, k, None)?.report_at(c);
    rep.extend(measure_plus(domain, grid, &ds, path, &PlusOptions::default())?.report_at(c, c - 1.0));

    let len = path.length();
    let d_min = ds.slices.iter().map(|s| s.d_s).fold(f64::INFINITY, f64::min);
    let step = if d_min.is_finite() { d_min / 8.0 } else { len / 64.0 }.max(len / 1e6).max(f64::MIN_POSITIVE);
    let n = ((len / step).ceil() as usize).max(1);
    let samples: Vec<Point2> = (0..=n).map(|i| path.point_at(len * i as f64 / n as f64)).chain(path.vertices().iter().copied()).collect();

    for s in &ds.slices {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for &p in &samples {
            if s.shape.contains_closed(p) {
                let r = domain.raw_delta(p) / s.d_s;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        if hi > 0.0 {
            let good = lo >= 1.0 / c - EPS && hi <= c + EPS;
            rep.push("slice_c", Some(s.label.clone()), Verdict::from_bool(good), true, &[("min_ratio", lo), ("max_ratio", hi)]);
        }
    }

    let (sx, sy) = snap_pair(grid, ds.x, ds.y)?;
    let fx = alpha_field(grid, sx, 0.0);
    let fy = alpha_field(grid, sy, 0.0);
    let mut uncovered = 0usize;
    let mut first_gap: Option<Point2> = None;
    for &p in &samples {
        if ds.slices.iter().any(|s| s.shape.contains_closed(p)) {
            continue;
        }
        let near = match grid.snap(p) {
            Ok(nd) => fx.dist[nd as usize] <= c || fy.dist[nd as usize] <= c,
            Err(_) => false,
        };
        if !near {
            uncovered += 1;
            first_gap.get_or_insert(p);
        }
    }
    rep.push(
        "slice_d",
        None,
        Verdict::from_bool(uncovered == 0),
        true,
        &[("samples", samples.len() as f64), ("uncovered", uncovered as f64), ("gap_x", first_gap.map_or(f64::NAN, |p| p.x)), ("gap_y", first_gap.map_or(f64::NAN, |p| p.y))],
    );
    let lk = len_alpha_polyline(domain, path, 0.0, DEFAULT_TOL)?;
    rep.push("path_efficiency", None, Verdict::from_bool(lk <= c * k * (1.0 + EPS)), true, &[("len_k", lk), ("k", k)]);
    Ok(rep)
}
