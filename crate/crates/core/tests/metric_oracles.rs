//! Grid estimates against closed-form distances.

use proptest::prelude::*;
use wslice_core::geometry::{rectangle, PlanarDomain, Point2, Polyline, Rect};
use wslice_core::metrics::grid::build_grid;
use wslice_core::metrics::paths::d_alpha;
use wslice_core::metrics::quadrature::{len_alpha_polyline, DEFAULT_TOL};

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

/// Vertical geodesic in the upper half-plane: `∫ t^{α-1} dt`.
fn half_plane(y1: f64, y2: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        (y2 / y1).ln()
    } else {
        (y2.powf(alpha) - y1.powf(alpha)) / alpha
    }
}

#[test]
fn tall_rectangle_matches_the_half_plane() {
    let dom = rectangle(Rect::new(0.0, 0.0, 10.0, 20.0)).unwrap();
    let g = build_grid(&dom, Rect::new(3.0, 0.0, 7.0, 2.0), 0.01).unwrap();
    let v = d_alpha(&g, Point2::new(5.0, 0.1), Point2::new(5.0, 0.5), 0.0).unwrap().value;
    assert!(rel(v, 5f64.ln()) < 0.05, "{v}");
}

#[test]
fn straight_corridor_midline() {
    let (l, w) = (1.0, 0.05);
    let dom = rectangle(Rect::new(-w, 0.0, l + w, w)).unwrap();
    let g = build_grid(&dom, dom.bbox(), w / 8.0).unwrap();
    let (x, y) = (Point2::new(0.0, w / 2.0), Point2::new(l, w / 2.0));
    let v0 = d_alpha(&g, x, y, 0.0).unwrap().value;
    assert!(rel(v0, 2.0 * l / w) < 0.02, "{v0}");
    let v5 = d_alpha(&g, x, y, 0.5).unwrap().value;
    assert!(rel(v5, l * (2.0 / w).sqrt()) < 0.02, "{v5}");
}

#[test]
fn alpha_one_path_length_is_arclength() {
    let dom = rectangle(Rect::new(0.0, 0.0, 1.0, 1.0)).unwrap();
    let p = Polyline::new(vec![Point2::new(0.1, 0.1), Point2::new(0.9, 0.2), Point2::new(0.5, 0.8)]).unwrap();
    let v = len_alpha_polyline(&dom, &p, 1.0, DEFAULT_TOL).unwrap();
    assert!((v - p.length()).abs() < 1e-12);
}

fn square() -> &'static (PlanarDomain, wslice_core::metrics::GridGraph) {
    static S: std::sync::OnceLock<(PlanarDomain, wslice_core::metrics::GridGraph)> = std::sync::OnceLock::new();
    S.get_or_init(|| {
        let dom = rectangle(Rect::new(0.0, 0.0, 1.0, 1.0)).unwrap();
        let g = build_grid(&dom, dom.bbox(), 1.0 / 64.0).unwrap();
        (dom, g)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn convex_square_alpha_one_is_euclidean(ax in 0.05..0.95f64, ay in 0.05..0.95f64, bx in 0.05..0.95f64, by in 0.05..0.95f64) {
        let (x, y) = (Point2::new(ax, ay), Point2::new(bx, by));
        prop_assume!(x.dist(y) > 0.1);
        let (_, g) = square();
        let v = d_alpha(g, x, y, 1.0).unwrap().value;
        // snapping moves each endpoint by at most h/√2
        let slack = 2.0 * (1.0 / 64.0) / 2f64.sqrt();
        prop_assert!(v <= x.dist(y) * 1.03 + slack && v >= x.dist(y) - slack, "{} vs {}", v, x.dist(y));
    }

    #[test]
    fn half_plane_profile(alpha in 0.0..0.95f64, i in 5u32..20, k in 2u32..20) {
        let h = 0.02;
        let (y1, y2) = (i as f64 * h, (i + k * 5) as f64 * h);
        let dom = rectangle(Rect::new(0.0, 0.0, 20.0, 40.0)).unwrap();
        let g = build_grid(&dom, Rect::new(8.0, 0.0, 12.0, y2 + 1.0), h).unwrap();
        let v = d_alpha(&g, Point2::new(10.0, y1), Point2::new(10.0, y2), alpha).unwrap().value;
        prop_assert!(rel(v, half_plane(y1, y2, alpha)) < 0.05, "{} vs {}", v, half_plane(y1, y2, alpha));
    }
}
