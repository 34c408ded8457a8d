use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use super::grid::GridGraph;
use super::paths::snap_pair;
use crate::error::{Error, Result};
use crate::geometry::{Point2, Polygon, Rect};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingResult {
    pub value: f64,
    pub source: u32,
    pub target: u32,
}

/// Minimum in-region length between grid nodes, for one fixed region.
///
/// Edges missing the region cost nothing, so the graph collapses to the
/// components of zero-cost edges joined by the few edges that enter the region.
pub struct CrossingOracle<'g> {
    g: &'g GridGraph,
    comp: Vec<u32>,
    adj: FxHashMap<u32, Vec<(u32, f64)>>,
    members: FxHashMap<u32, Vec<u32>>,
}

fn in_shapes_length(shapes: &[Polygon], a: Point2, b: Point2) -> f64 {
    shapes.iter().map(|s| s.clipped_length(a, b)).sum()
}

impl<'g> CrossingOracle<'g> {
    pub fn new(g: &'g GridGraph, shapes: &[Polygon]) -> Self {
        let reach = 2.5 * g.h_max();
        let boxes: Vec<Rect> = shapes.iter().map(|s| s.bbox().expand(reach)).collect();
        let mut adj: FxHashMap<u32, Vec<(u32, f64)>> = FxHashMap::default();
        let n = g.len() as u32;
        for a in 0..n {
            let p = g.pos(a);
            if !boxes.iter().any(|b| b.contains(p)) {
                continue;
            }
            for &b in g.neighbors(a) {
                if b <= a && boxes.iter().any(|bb| bb.contains(g.pos(b))) {
                    continue; // handled from the other endpoint
                }
                let w = in_shapes_length(shapes, p, g.pos(b));
                if w > 0.0 {
                    adj.entry(a).or_default().push((b, w));
                    adj.entry(b).or_default().push((a, w));
                }
            }
        }
        let mut parent: Vec<u32> = (0..n).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for a in 0..n {
            let heavy = adj.get(&a);
            for &b in g.neighbors(a) {
                if b < a {
                    continue;
                }
                if heavy.is_some_and(|v| v.iter().any(|&(t, _)| t == b)) {
                    continue;
                }
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb) as usize] = ra.min(rb);
                }
            }
        }
        let comp: Vec<u32> = (0..n).map(|v| find(&mut parent, v)).collect();
        let mut members: FxHashMap<u32, Vec<u32>> = FxHashMap::default();
        let mut touched: Vec<u32> = adj.keys().copied().collect();
        touched.sort_unstable();
        for v in touched {
            members.entry(comp[v as usize]).or_default().push(v);
        }
        CrossingOracle { g, comp, adj, members }
    }

    pub fn zero_component(&self, v: u32) -> u32 {
        self.comp[v as usize]
    }

    /// True when every grid path between the nodes meets the region.
    pub fn separates(&self, a: u32, b: u32) -> bool {
        self.comp[a as usize] != self.comp[b as usize]
    }

    pub fn query(&self, a: u32, b: u32) -> f64 {
        let (ca, cb) = (self.comp[a as usize], self.comp[b as usize]);
        if ca == cb {
            return 0.0;
        }
        #[derive(PartialEq)]
        struct St(f64, u32);
        impl Eq for St {}
        impl Ord for St {
            fn cmp(&self, o: &Self) -> std::cmp::Ordering {
                o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
            }
        }
        impl PartialOrd for St {
            fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(o))
            }
        }
        let mut dist: FxHashMap<u32, f64> = FxHashMap::default();
        let mut opened: rustc_hash::FxHashSet<u32> = Default::default();
        let mut heap = BinaryHeap::new();
        let open = |c: u32, d: f64, dist: &mut FxHashMap<u32, f64>, heap: &mut BinaryHeap<St>| {
            if let Some(ms) = self.members.get(&c) {
                for &m in ms {
                    let e = dist.entry(m).or_insert(f64::INFINITY);
                    if d < *e {
                        *e = d;
                        heap.push(St(d, m));
                    }
                }
            }
        };
        opened.insert(ca);
        open(ca, 0.0, &mut dist, &mut heap);
        while let Some(St(d, v)) = heap.pop() {
            if d > dist[&v] {
                continue;
            }
            let cv = self.comp[v as usize];
            if cv == cb {
                return d;
            }
            if opened.insert(cv) {
                open(cv, d, &mut dist, &mut heap);
            }
            if let Some(es) = self.adj.get(&v) {
                for &(u, w) in es {
                    let nd = d + w;
                    let e = dist.entry(u).or_insert(f64::INFINITY);
                    if nd < *e {
                        *e = nd;
                        heap.push(St(nd, u));
                    }
                }
            }
        }
        f64::INFINITY
    }

    pub fn grid(&self) -> &GridGraph {
        self.g
    }
}

/// Minimum in-region length over grid paths between the snapped points.
pub fn min_region_length(g: &GridGraph, shapes: &[Polygon], x: Point2, y: Point2) -> Result<CrossingResult> {
    let (sx, sy) = snap_pair(g, x, y)?;
    let o = CrossingOracle::new(g, shapes);
    Ok(CrossingResult { value: o.query(sx, sy), source: sx, target: sy })
}

/// As [`min_region_length`], rejecting endpoints in the closed region.
pub fn min_crossing_length(g: &GridGraph, shapes: &[Polygon], label: &str, x: Point2, y: Point2) -> Result<f64> {
    if shapes.iter().any(|s| s.contains_closed(x) || s.contains_closed(y)) {
        return Err(Error::EndpointInsideSlice(label.to_string()));
    }
    Ok(min_region_length(g, shapes, x, y)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rectangle;
    use crate::metrics::grid::build_grid;

    #[test]
    fn strip_across_corridor() {
        let d = rectangle(Rect::new(0.0, 0.0, 4.0, 0.5)).unwrap();
        let h = 0.02;
        let g = build_grid(&d, Rect::new(0.0, 0.0, 4.0, 0.5), h).unwrap();
        let strip = Rect::new(1.7, -1.0, 2.2, 2.0).to_polygon();
        let v = min_crossing_length(&g, &[strip.clone()], "s", Point2::new(0.5, 0.25), Point2::new(3.5, 0.25)).unwrap();
        assert!((v - 0.5).abs() <= 2.0 * h, "{v}");
        let off = Rect::new(1.7, 0.3, 2.2, 0.6).to_polygon();
        let v = min_crossing_length(&g, &[off], "s", Point2::new(0.5, 0.25), Point2::new(3.5, 0.25)).unwrap();
        assert_eq!(v, 0.0);
        assert!(matches!(
            min_crossing_length(&g, &[strip], "s", Point2::new(2.0, 0.25), Point2::new(3.5, 0.25)),
            Err(Error::EndpointInsideSlice(_))
        ));
    }
}
