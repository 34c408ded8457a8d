//! Fixtures, strategies and single-case checks shared by the property suites and the acceptance run.
#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use wslice_core::geometry::{domain_from_json, domain_to_json, rectangle, DecoratedSquareSpec, PlanarDomain, Point2, Polyline, RModifier, Rect};
use wslice_core::metrics::crossing::CrossingOracle;
use wslice_core::metrics::grid::{build_grid, GridGraph};
use wslice_core::metrics::paths::{d_alpha, d_alpha_nodes, node_factors};
use wslice_core::slices::checks::{evaluate_dataset, measure_dataset};
use wslice_core::slices::region::{dataset_from_json, dataset_to_json, SliceRegion, WsliceDataset};

pub type CaseResult = Result<(), TestCaseError>;

/// Unit square with a rectangular hole and an interior slit.
pub fn holed() -> &'static (PlanarDomain, GridGraph) {
    static S: OnceLock<(PlanarDomain, GridGraph)> = OnceLock::new();
    S.get_or_init(|| {
        let slit = Polyline::new(vec![Point2::new(0.2, 0.8), Point2::new(0.8, 0.8)]).unwrap();
        let dom = PlanarDomain::new(vec![Rect::new(0.0, 0.0, 1.0, 1.0).to_polygon()], vec![Rect::new(0.3, 0.3, 0.7, 0.5).to_polygon()], vec![slit]).unwrap();
        let g = build_grid(&dom, dom.bbox(), 1.0 / 32.0).unwrap();
        (dom, g)
    })
}

/// At most 200 nodes.
pub fn small() -> &'static (PlanarDomain, GridGraph) {
    static S: OnceLock<(PlanarDomain, GridGraph)> = OnceLock::new();
    S.get_or_init(|| {
        let dom = PlanarDomain::new(vec![Rect::new(0.0, 0.0, 1.0, 1.0).to_polygon()], vec![Rect::new(0.4, 0.4, 0.6, 0.6).to_polygon()], vec![]).unwrap();
        let g = build_grid(&dom, dom.bbox(), 1.0 / 12.0).unwrap();
        assert!(g.len() <= 200);
        (dom, g)
    })
}

pub fn node(g: &GridGraph, u: f64) -> u32 {
    ((u * g.len() as f64) as u32).min(g.len() as u32 - 1)
}

pub fn symmetric((u, v, alpha): (f64, f64, f64)) -> CaseResult {
    let (_, g) = holed();
    let f = node_factors(g, alpha);
    let (a, b) = (node(g, u), node(g, v));
    let (ab, ba) = (d_alpha_nodes(g, &f, a, b), d_alpha_nodes(g, &f, b, a));
    prop_assert!((ab - ba).abs() <= 1e-12 * ab.max(1.0), "{} {}", ab, ba);
    Ok(())
}

pub fn triangle((u, v, w, alpha): (f64, f64, f64, f64)) -> CaseResult {
    let (_, g) = holed();
    let f = node_factors(g, alpha);
    let (a, b, c) = (node(g, u), node(g, v), node(g, w));
    let ac = d_alpha_nodes(g, &f, a, c);
    let abc = d_alpha_nodes(g, &f, a, b) + d_alpha_nodes(g, &f, b, c);
    prop_assert!(ac <= abc * (1.0 + 1e-12), "{} > {}", ac, abc);
    Ok(())
}

/// With `δ < 1` throughout, a larger exponent can only shorten every edge.
pub fn nonincreasing_in_alpha((u, v, a1, a2): (f64, f64, f64, f64)) -> CaseResult {
    let (_, g) = holed();
    let (lo, hi) = (a1.min(a2), a1.max(a2));
    let (a, b) = (node(g, u), node(g, v));
    let d_lo = d_alpha_nodes(g, &node_factors(g, lo), a, b);
    let d_hi = d_alpha_nodes(g, &node_factors(g, hi), a, b);
    prop_assert!(d_hi <= d_lo * (1.0 + 1e-12), "{} > {}", d_hi, d_lo);
    Ok(())
}

/// In-rectangle length of a segment, by parametric clipping.
pub fn clip_len(r: &Rect, a: Point2, b: Point2) -> f64 {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let d = Point2::new(b.x - a.x, b.y - a.y);
    for (p, q) in [(-d.x, a.x - r.min.x), (d.x, r.max.x - a.x), (-d.y, a.y - r.min.y), (d.y, r.max.y - a.y)] {
        if p == 0.0 {
            if q < 0.0 {
                return 0.0;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    (t1 - t0).max(0.0) * a.dist(b)
}

/// All-pairs least in-region length, Floyd–Warshall.
pub fn floyd(g: &GridGraph, r: &Rect) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for a in 0..n {
        d[a][a] = 0.0;
        for &b in g.neighbors(a as u32) {
            let w = clip_len(r, g.pos(a as u32), g.pos(b));
            d[a][b as usize] = d[a][b as usize].min(w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let v = dik + d[k][j];
                if v < d[i][j] {
                    d[i][j] = v;
                }
            }
        }
    }
    d
}

pub type CrossingCase = (f64, f64, f64, f64, Vec<(f64, f64)>);

pub fn crossing_case() -> impl Strategy<Value = CrossingCase> {
    (-0.1..1.0f64, -0.1..1.0f64, 0.02..0.8f64, 0.02..0.8f64, proptest::collection::vec((0.0..1.0f64, 0.0..1.0f64), 5))
}

pub fn crossing_matches_brute_force((x0, y0, w, h, pairs): CrossingCase) -> CaseResult {
    let (_, g) = small();
    let r = Rect::new(x0, y0, x0 + w, y0 + h);
    let o = CrossingOracle::new(g, &[r.to_polygon()]);
    let d = floyd(g, &r);
    for (u, v) in pairs {
        let (a, b) = (node(g, u), node(g, v));
        let want = d[a as usize][b as usize];
        let got = o.query(a, b);
        prop_assert!((got - want).abs() <= 1e-9, "{} vs {}", got, want);
        prop_assert_eq!(o.separates(a, b), want > 1e-12);
    }
    Ok(())
}

const STRIP_H: f64 = 0.25;

/// `[0,10t]×[0,4t]` with a uniform grid of spacing `t/4`.
pub fn strip_setup(t: f64) -> (PlanarDomain, GridGraph) {
    let r = Rect::new(0.0, 0.0, 10.0 * t, 4.0 * t);
    let dom = rectangle(r).unwrap();
    let g = build_grid(&dom, r, STRIP_H * t).unwrap();
    (dom, g)
}

pub type Strips = Vec<(f64, f64, f64)>;

/// Gap before, width and `d_S` inflation of each strip.
pub fn strips() -> impl Strategy<Value = Strips> {
    proptest::collection::vec((0.0..1.5f64, 0.2..2.0f64, 1.0..20.0f64), 0..4)
}

/// Vertical strips between `x = (1, 2)` and `y = (9, 2)`.
pub fn strip_dataset(dom: &PlanarDomain, strips: &[(f64, f64, f64)], c: f64, alpha: f64) -> WsliceDataset {
    let mut slices = Vec::new();
    let mut left = 2.0;
    for (i, &(gap, width, inflate)) in strips.iter().enumerate() {
        let x0 = left + gap;
        let x1 = (x0 + width).min(8.0);
        if x1 - x0 < 0.1 {
            break;
        }
        let shape = Rect::new(x0, -0.5, x1, 4.5).to_polygon();
        let mut s = SliceRegion::measured(dom, shape, format!("s{i}")).unwrap();
        s.d_s *= inflate;
        slices.push(s);
        left = x1;
    }
    WsliceDataset::new(Point2::new(1.0, 2.0), Point2::new(9.0, 2.0), c, alpha, slices).unwrap()
}

pub fn monotone_in_c((st, alpha, c1, c2): (Strips, f64, f64, f64)) -> CaseResult {
    let (dom, g) = strip_setup(1.0);
    let (lo, hi) = (c1.min(c2), c1.max(c2));
    let ds = strip_dataset(&dom, &st, lo, alpha);
    let d = d_alpha(&g, ds.x, ds.y, alpha).unwrap().value;
    let m = measure_dataset(&dom, &g, &ds, d, None).unwrap();
    if m.passes(lo) {
        prop_assert!(m.passes(hi));
    }
    prop_assert_eq!(evaluate_dataset(&dom, &g, &ds, d).unwrap().overall, m.passes(lo));
    prop_assert_eq!(evaluate_dataset(&dom, &g, &ds.with_c(hi), d).unwrap().overall, m.passes(hi));
    Ok(())
}

/// Dilating by a power of two is exact in floating point, so the grids agree node for node.
pub fn dilation((st, k, alpha, c): (Strips, i32, f64, f64)) -> CaseResult {
    let t = 2f64.powi(k);
    let (dom, g) = strip_setup(1.0);
    let (dom_t, g_t) = strip_setup(t);
    let ds = strip_dataset(&dom, &st, c, alpha);
    let ds_t = ds.scaled(t);
    let d = d_alpha(&g, ds.x, ds.y, alpha).unwrap().value;
    let d_t = d_alpha(&g_t, ds_t.x, ds_t.y, alpha).unwrap().value;
    prop_assert!((d_t / d - t.powf(alpha)).abs() <= 1e-9 * t.powf(alpha));
    let m = measure_dataset(&dom, &g, &ds, d, None).unwrap();
    let m_t = measure_dataset(&dom_t, &g_t, &ds_t, d_t, None).unwrap();
    prop_assert!((m_t.sigma / m.sigma - t.powf(alpha)).abs() <= 1e-9 * t.powf(alpha));
    let ds0 = WsliceDataset { alpha: 0.0, ..ds.clone() };
    let ds0_t = ds0.scaled(t);
    let d0 = d_alpha(&g, ds.x, ds.y, 0.0).unwrap().value;
    let d0_t = d_alpha(&g_t, ds0_t.x, ds0_t.y, 0.0).unwrap().value;
    let v = measure_dataset(&dom, &g, &ds0, d0, None).unwrap();
    let v_t = measure_dataset(&dom_t, &g_t, &ds0_t, d0_t, None).unwrap();
    prop_assert_eq!(v.passes(c), v_t.passes(c));
    Ok(())
}

fn seg_dist(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let l2 = dx * dx + dy * dy;
    let t = if l2 == 0.0 { 0.0 } else { (((p.x - a.x) * dx + (p.y - a.y) * dy) / l2).clamp(0.0, 1.0) };
    let (qx, qy) = (a.x + t * dx, a.y + t * dy);
    ((p.x - qx).powi(2) + (p.y - qy).powi(2)).sqrt()
}

/// Minimum over every boundary piece, with no spatial index.
pub fn delta_oracle(d: &PlanarDomain, p: Point2) -> f64 {
    let mut best = f64::INFINITY;
    for poly in d.outer().iter().chain(d.holes()) {
        let v = poly.vertices();
        for i in 0..v.len() {
            best = best.min(seg_dist(p, v[i], v[(i + 1) % v.len()]));
        }
    }
    for s in d.slits() {
        for w in s.vertices().windows(2) {
            best = best.min(seg_dist(p, w[0], w[1]));
        }
    }
    best
}

pub fn delta_matches_brute_force((s, u, v): (DecoratedSquareSpec, f64, f64)) -> CaseResult {
    let dom = s.build().unwrap();
    let b = dom.decorations()[0].bbox();
    let p = Point2::new(b.min.x + u * b.width(), b.min.y + v * b.height());
    match dom.distance_to_boundary(p) {
        Ok(d) => prop_assert!((d - delta_oracle(&dom, p)).abs() <= 1e-12, "{} vs {}", d, delta_oracle(&dom, p)),
        Err(_) => prop_assert!(!dom.contains(p)),
    }
    Ok(())
}

pub fn mirror_symmetric((s, u, v): (DecoratedSquareSpec, f64, f64)) -> CaseResult {
    let dom = s.build().unwrap();
    for d in dom.decorations() {
        let (x, y) = (u * d.total(), v * d.half_height());
        let (p, q) = (d.global(x, y), d.global(x, -y));
        prop_assert_eq!(dom.contains(p), dom.contains(q));
        if dom.contains(p) {
            let (dp, dq) = (dom.distance_to_boundary(p).unwrap(), dom.distance_to_boundary(q).unwrap());
            prop_assert!((dp - dq).abs() <= 1e-12, "{} vs {}", dp, dq);
        }
    }
    Ok(())
}

pub fn family_spec(kind: u8, a0: f64, gap: f64, js: &[u32]) -> DecoratedSquareSpec {
    let a1 = (a0 + gap).min(0.95);
    match kind {
        0 => DecoratedSquareSpec::ex32(js),
        1 => DecoratedSquareSpec::thm43(a0, 3.0, 6.0, js),
        2 => DecoratedSquareSpec::ex44(a0, 3.0, 6.0, js),
        3 => DecoratedSquareSpec::ex45(a0, 3.0, 6.0, js, RModifier::DivJ),
        _ => DecoratedSquareSpec::ex46(a0, a1, 3.0, 6.0, js),
    }
    .unwrap()
}

pub fn any_spec() -> impl Strategy<Value = DecoratedSquareSpec> {
    (0u8..5, 0.1..0.8f64, 0.05..0.3f64, proptest::sample::subsequence(vec![2u32, 3, 4], 1..=3)).prop_map(|(k, a0, g, js)| family_spec(k, a0, g, &js))
}

pub fn domain_fixed_point(s: DecoratedSquareSpec) -> CaseResult {
    let dom = s.build().unwrap();
    let text = domain_to_json(&dom);
    let back = domain_from_json(&text).unwrap();
    prop_assert_eq!(domain_to_json(&back), text);
    prop_assert!(back == dom);
    let st = serde_json::to_string(&s).unwrap();
    let s2: DecoratedSquareSpec = serde_json::from_str(&st).unwrap();
    prop_assert_eq!(s2, s);
    Ok(())
}

pub type DatasetCase = (f64, f64, f64, f64, Vec<f64>);

pub fn dataset_case() -> impl Strategy<Value = DatasetCase> {
    (0.5..1.5f64, 8.5..9.5f64, 1.0..100.0f64, 0.0..1.0f64, proptest::collection::vec(2.0..8.0f64, 0..6))
}

pub fn dataset_fixed_point((x, y, c, alpha, mut cuts): DatasetCase) -> CaseResult {
    let dom = rectangle(Rect::new(0.0, 0.0, 10.0, 4.0)).unwrap();
    cuts.sort_by(f64::total_cmp);
    let slices: Vec<SliceRegion> = cuts
        .chunks_exact(2)
        .filter(|w| w[1] - w[0] > 1e-3)
        .map(|w| SliceRegion::measured(&dom, Rect::new(w[0], -1.0, w[1], 5.0).to_polygon(), "s").unwrap())
        .collect();
    let ds = WsliceDataset::new(Point2::new(x, 2.0), Point2::new(y, 2.0), c, alpha, slices).unwrap();
    let text = dataset_to_json(&ds);
    let back = dataset_from_json(&text).unwrap();
    prop_assert_eq!(dataset_to_json(&back), text);
    prop_assert_eq!(back, ds);
    Ok(())
}
