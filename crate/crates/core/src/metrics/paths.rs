use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::grid::GridGraph;
use crate::error::{Error, Result};
use crate::geometry::{Point2, Polyline};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EstimateKind {
    UpperBound,
    GridOptimum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathEstimate {
    pub polyline: Polyline,
    pub value: f64,
    pub alpha: f64,
    pub kind: EstimateKind,
}

#[derive(Copy, Clone, PartialEq)]
struct State {
    cost: f64,
    node: u32,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct ShortestPaths {
    pub dist: Vec<f64>,
    pub pred: Vec<u32>,
}

impl ShortestPaths {
    /// Node sequence from the source tree root to `t`.
    pub fn path_to(&self, t: u32) -> Vec<u32> {
        let mut v = vec![t];
        let mut c = t;
        while self.pred[c as usize] != u32::MAX {
            c = self.pred[c as usize];
            v.push(c);
        }
        v.reverse();
        v
    }
}

/// Dijkstra from `src`; stops once `target` is settled.
pub fn dijkstra<F>(g: &GridGraph, src: u32, target: Option<u32>, weight: F) -> ShortestPaths
where
    F: Fn(u32, u32) -> f64,
{
    let n = g.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![u32::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[src as usize] = 0.0;
    heap.push(State { cost: 0.0, node: src });
    while let Some(State { cost, node }) = heap.pop() {
        if cost > dist[node as usize] {
            continue;
        }
        if Some(node) == target {
            break;
        }
        for &m in g.neighbors(node) {
            let c = cost + weight(node, m);
            if c < dist[m as usize] {
                dist[m as usize] = c;
                pred[m as usize] = node;
                heap.push(State { cost: c, node: m });
            }
        }
    }
    ShortestPaths { dist, pred }
}

/// `δ^{α−1}` with the two endpoint exponents computed exactly.
pub fn weight_factor(delta: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0 / delta
    } else if alpha == 1.0 {
        1.0
    } else {
        delta.powf(alpha - 1.0)
    }
}

pub fn node_factors(g: &GridGraph, alpha: f64) -> Vec<f64> {
    g.deltas().iter().map(|&d| weight_factor(d, alpha)).collect()
}

/// Trapezoid weight of the straight edge between two nodes.
pub fn edge_weight(g: &GridGraph, f: &[f64], a: u32, b: u32) -> f64 {
    0.5 * g.pos(a).dist(g.pos(b)) * (f[a as usize] + f[b as usize])
}

pub fn alpha_field(g: &GridGraph, src: u32, alpha: f64) -> ShortestPaths {
    let f = node_factors(g, alpha);
    dijkstra(g, src, None, |a, b| edge_weight(g, &f, a, b))
}

pub fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::SpecInvalid(format!("alpha = {alpha} outside [0,1]")))
    }
}

/// Snaps both points and checks they share a component.
pub fn snap_pair(g: &GridGraph, x: Point2, y: Point2) -> Result<(u32, u32)> {
    let sx = g.snap(x)?;
    let sy = g.snap(y)?;
    if g.component(sx) != g.component(sy) {
        return Err(Error::Disconnected);
    }
    Ok((sx, sy))
}

pub fn nodes_to_polyline(g: &GridGraph, nodes: &[u32]) -> Result<Polyline> {
    Polyline::from_path(nodes.iter().map(|&n| g.pos(n)).collect())
}

/// Grid estimate of `d_α(x, y)`.
pub fn d_alpha(g: &GridGraph, x: Point2, y: Point2, alpha: f64) -> Result<PathEstimate> {
    check_alpha(alpha)?;
    if x == y {
        g.snap(x)?;
        return Ok(PathEstimate { polyline: Polyline::constant(x), value: 0.0, alpha, kind: EstimateKind::GridOptimum });
    }
    let (sx, sy) = snap_pair(g, x, y)?;
    if sx == sy {
        let n = g.pos(sx);
        return Ok(PathEstimate { polyline: Polyline::constant(n), value: 0.0, alpha, kind: EstimateKind::GridOptimum });
    }
    let f = node_factors(g, alpha);
    let (s, t) = if sx < sy { (sx, sy) } else { (sy, sx) };
    let sp = dijkstra(g, s, Some(t), |a, b| edge_weight(g, &f, a, b));
    let mut nodes = sp.path_to(t);
    if s != sx {
        nodes.reverse();
    }
    Ok(PathEstimate { polyline: nodes_to_polyline(g, &nodes)?, value: sp.dist[t as usize], alpha, kind: EstimateKind::GridOptimum })
}

/// Value only, for repeated queries sharing node factors.
pub fn d_alpha_nodes(g: &GridGraph, f: &[f64], a: u32, b: u32) -> f64 {
    if a == b {
        return 0.0;
    }
    let (s, t) = if a < b { (a, b) } else { (b, a) };
    dijkstra(g, s, Some(t), |u, v| edge_weight(g, f, u, v)).dist[t as usize]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rectangle, Rect};
    use crate::metrics::grid::build_grid;

    #[test]
    fn euclidean_in_square() {
        let d = rectangle(Rect::new(0.0, 0.0, 1.0, 1.0)).unwrap();
        let g = build_grid(&d, Rect::new(0.0, 0.0, 1.0, 1.0), 0.02).unwrap();
        let x = Point2::new(0.1, 0.2);
        let y = Point2::new(0.86, 0.62);
        let e = d_alpha(&g, x, y, 1.0).unwrap();
        let exact = g.pos(g.snap(x).unwrap()).dist(g.pos(g.snap(y).unwrap()));
        assert!(e.value >= exact * (1.0 - 1e-12));
        assert!(e.value <= exact * 1.03);
        let back = d_alpha(&g, y, x, 1.0).unwrap();
        assert_eq!(back.value, e.value);
        assert_eq!(back.polyline.reversed(), e.polyline);
    }

    #[test]
    fn zero_for_equal_points() {
        let d = rectangle(Rect::new(0.0, 0.0, 1.0, 1.0)).unwrap();
        let g = build_grid(&d, Rect::new(0.0, 0.0, 1.0, 1.0), 0.1).unwrap();
        let p = Point2::new(0.5, 0.5);
        assert_eq!(d_alpha(&g, p, p, 0.0).unwrap().value, 0.0);
    }
}
