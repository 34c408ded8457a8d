use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    pub fn dist2(self, o: Point2) -> f64 {
        let dx = self.x - o.x;
        let dy = self.y - o.y;
        dx * dx + dy * dy
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    /// Reflection across the horizontal line `y = c`.
    pub fn mirror_y(self, c: f64) -> Point2 {
        Point2::new(self.x, 2.0 * c - self.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(v: [f64; 2]) -> Self {
        Point2::new(v[0], v[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

/// Axis-aligned closed rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point2,
    pub max: Point2,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Rect {
            min: Point2::new(x0.min(x1), y0.min(y1)),
            max: Point2::new(x0.max(x1), y0.max(y1)),
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn expand(&self, m: f64) -> Rect {
        Rect::new(self.min.x - m, self.min.y - m, self.max.x + m, self.max.y + m)
    }

    pub fn intersects(&self, o: &Rect) -> bool {
        self.min.x <= o.max.x && o.min.x <= self.max.x && self.min.y <= o.max.y && o.min.y <= self.max.y
    }

    pub fn intersection(&self, o: &Rect) -> Option<Rect> {
        self.intersects(o).then(|| Rect {
            min: Point2::new(self.min.x.max(o.min.x), self.min.y.max(o.min.y)),
            max: Point2::new(self.max.x.min(o.max.x), self.max.y.min(o.max.y)),
        })
    }

    pub fn union(&self, o: &Rect) -> Rect {
        Rect {
            min: Point2::new(self.min.x.min(o.min.x), self.min.y.min(o.min.y)),
            max: Point2::new(self.max.x.max(o.max.x), self.max.y.max(o.max.y)),
        }
    }

    /// Euclidean distance from `p` to the rectangle (0 inside).
    pub fn dist(&self, p: Point2) -> f64 {
        let dx = (self.min.x - p.x).max(0.0).max(p.x - self.max.x);
        let dy = (self.min.y - p.y).max(0.0).max(p.y - self.max.y);
        dx.hypot(dy)
    }

    pub fn bounding(points: &[Point2]) -> Option<Rect> {
        let first = points.first()?;
        let mut r = Rect { min: *first, max: *first };
        for p in &points[1..] {
            r.min.x = r.min.x.min(p.x);
            r.min.y = r.min.y.min(p.y);
            r.max.x = r.max.x.max(p.x);
            r.max.y = r.max.y.max(p.y);
        }
        Some(r)
    }

    pub fn to_polygon(&self) -> Polygon {
        Polygon::new(vec![
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ])
        .expect("non-degenerate rectangle")
    }
}

pub fn point_segment_dist(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let l2 = ab.dot(ab);
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / l2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segment intersection test, collinear overlaps included.
pub fn segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// True when the segments cross at a single point interior to both.
pub fn segments_cross_properly(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Parameters `t` along `p1→p2` where the segment meets `q1→q2`.
/// Collinear overlaps contribute both ends of the overlap.
pub fn segment_intersection_params(p1: Point2, p2: Point2, q1: Point2, q2: Point2, out: &mut Vec<f64>) {
    let r = p2 - p1;
    let s = q2 - q1;
    let denom = r.cross(s);
    let qp = q1 - p1;
    if denom != 0.0 {
        let t = qp.cross(s) / denom;
        let u = qp.cross(r) / denom;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
            out.push(t);
        }
        return;
    }
    if qp.cross(r) != 0.0 {
        return;
    }
    let rr = r.dot(r);
    if rr == 0.0 {
        return;
    }
    let t0 = qp.dot(r) / rr;
    let t1 = (q2 - p1).dot(r) / rr;
    let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
    if hi < 0.0 || lo > 1.0 {
        return;
    }
    out.push(lo.max(0.0));
    out.push(hi.min(1.0));
}

/// Polyline with distinct consecutive vertices. A single vertex denotes a constant path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct Polyline {
    vertices: Vec<Point2>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::SpecInvalid("polyline needs at least two vertices".into()));
        }
        Self::check(&vertices)?;
        Ok(Polyline { vertices })
    }

    pub fn constant(p: Point2) -> Self {
        Polyline { vertices: vec![p] }
    }

    /// Builds a path, dropping repeated consecutive vertices.
    pub fn from_path(mut vertices: Vec<Point2>) -> Result<Self> {
        vertices.dedup();
        if vertices.is_empty() {
            return Err(Error::SpecInvalid("empty path".into()));
        }
        Self::check(&vertices)?;
        Ok(Polyline { vertices })
    }

    fn check(v: &[Point2]) -> Result<()> {
        if let Some(p) = v.iter().find(|p| !p.is_finite()) {
            return Err(Error::SpecInvalid(format!("non-finite vertex {p:?}")));
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::SpecInvalid("repeated consecutive vertex".into()));
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn start(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn end(&self) -> Point2 {
        *self.vertices.last().unwrap()
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn reversed(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline { vertices: v }
    }

    pub fn is_simple(&self) -> bool {
        let segs: Vec<_> = self.segments().collect();
        for i in 0..segs.len() {
            for k in i + 2..segs.len() {
                let (a, b) = segs[i];
                let (c, d) = segs[k];
                if segments_intersect(a, b, c, d) {
                    return false;
                }
            }
            if i + 1 < segs.len() {
                let (a, b) = segs[i];
                let (_, d) = segs[i + 1];
                // adjacent segments may only share their common vertex
                if orient(a, b, d) == 0.0 && (d - b).dot(a - b) > 0.0 {
                    return false;
                }
            }
        }
        true
    }

    /// Point at arclength `s` from the start (clamped).
    pub fn point_at(&self, s: f64) -> Point2 {
        let mut acc = 0.0;
        for (a, b) in self.segments() {
            let l = a.dist(b);
            if acc + l >= s {
                return a.lerp(b, if l > 0.0 { (s - acc) / l } else { 0.0 });
            }
            acc += l;
        }
        self.end()
    }
}

impl TryFrom<Vec<Point2>> for Polyline {
    type Error = Error;
    fn try_from(v: Vec<Point2>) -> Result<Self> {
        if v.len() == 1 {
            return Ok(Polyline::constant(v[0]));
        }
        Polyline::new(v)
    }
}

impl From<Polyline> for Vec<Point2> {
    fn from(p: Polyline) -> Self {
        p.vertices
    }
}

/// Simple counterclockwise polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct Polygon {
    vertices: Vec<Point2>,
    #[serde(skip)]
    bbox: Option<Rect>,
}

impl Polygon {
    /// Builds a polygon, reorienting clockwise input.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() >= 2 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::SpecInvalid("polygon needs at least three vertices".into()));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::SpecInvalid(format!("non-finite vertex {p:?}")));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::SpecInvalid(format!("repeated consecutive vertex {:?}", vertices[i])));
            }
        }
        let a = signed_area(&vertices);
        if a == 0.0 {
            return Err(Error::SpecInvalid("polygon has zero area".into()));
        }
        if a < 0.0 {
            vertices.reverse();
        }
        let bbox = Rect::bounding(&vertices);
        let poly = Polygon { vertices, bbox };
        if !poly.is_simple() {
            return Err(Error::SpecInvalid("polygon is not simple".into()));
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn bbox(&self) -> Rect {
        self.bbox.unwrap_or_else(|| Rect::bounding(&self.vertices).unwrap())
    }

    fn is_simple(&self) -> bool {
        let edges: Vec<_> = self.edges().collect();
        let n = edges.len();
        for i in 0..n {
            for k in i + 1..n {
                let adjacent = k == i + 1 || (i == 0 && k == n - 1);
                let (a, b) = edges[i];
                let (c, d) = edges[k];
                if adjacent {
                    // shared vertex only; reject folding back along the same line
                    let (shared, p, q) = if k == i + 1 { (b, a, d) } else { (a, b, c) };
                    if orient(p, shared, q) == 0.0 && (p - shared).dot(q - shared) > 0.0 {
                        return false;
                    }
                } else if segments_intersect(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    /// Even-odd test; points on the boundary may land on either side.
    pub fn contains_raw(&self, p: Point2) -> bool {
        let b = self.bbox();
        if !b.contains(p) {
            return false;
        }
        let mut inside = false;
        for (a, c) in self.edges() {
            if (a.y > p.y) != (c.y > p.y) {
                let x = a.x + (p.y - a.y) * (c.x - a.x) / (c.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn boundary_dist(&self, p: Point2) -> f64 {
        self.edges().map(|(a, b)| point_segment_dist(p, a, b)).fold(f64::INFINITY, f64::min)
    }

    pub fn on_boundary(&self, p: Point2) -> bool {
        self.edges().any(|(a, b)| orient(a, b, p) == 0.0 && on_segment(a, b, p))
    }

    /// Open interior.
    pub fn contains_strict(&self, p: Point2) -> bool {
        !self.on_boundary(p) && self.contains_raw(p)
    }

    /// Closed polygon.
    pub fn contains_closed(&self, p: Point2) -> bool {
        self.on_boundary(p) || self.contains_raw(p)
    }

    /// Parameter intervals of `a→b` lying in the closed polygon.
    pub fn clip_segment(&self, a: Point2, b: Point2) -> Vec<(f64, f64)> {
        let bb = self.bbox();
        let sb = Rect::new(a.x, a.y, b.x, b.y);
        if !bb.intersects(&sb) {
            return Vec::new();
        }
        let mut ts = vec![0.0, 1.0];
        for (c, d) in self.edges() {
            segment_intersection_params(a, b, c, d, &mut ts);
        }
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let mut out: Vec<(f64, f64)> = Vec::new();
        for w in ts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            if t1 <= t0 {
                continue;
            }
            if self.contains_closed(a.lerp(b, 0.5 * (t0 + t1))) {
                match out.last_mut() {
                    Some(last) if last.1 == t0 => last.1 = t1,
                    _ => out.push((t0, t1)),
                }
            }
        }
        out
    }

    /// Length of `a→b` inside the polygon.
    pub fn clipped_length(&self, a: Point2, b: Point2) -> f64 {
        let l = a.dist(b);
        self.clip_segment(a, b).iter().map(|(t0, t1)| (t1 - t0) * l).sum()
    }

    pub fn translated(&self, d: Point2) -> Polygon {
        Polygon { vertices: self.vertices.iter().map(|&p| p + d).collect(), bbox: self.bbox.map(|b| Rect { min: b.min + d, max: b.max + d }) }
    }

    pub fn scaled(&self, t: f64) -> Polygon {
        Polygon::new(self.vertices.iter().map(|&p| p * t).collect()).expect("scaling keeps a polygon valid")
    }

    /// A point in the open interior.
    pub fn interior_point(&self) -> Point2 {
        let b = self.bbox();
        let mut best: Option<(f64, Point2)> = None;
        for k in 1..8 {
            let y = b.min.y + b.height() * (k as f64) / 8.0 + b.height() * 1e-7;
            let mut xs: Vec<f64> = self
                .edges()
                .filter(|(a, c)| (a.y > y) != (c.y > y))
                .map(|(a, c)| a.x + (y - a.y) * (c.x - a.x) / (c.y - a.y))
                .collect();
            xs.sort_by(f64::total_cmp);
            for pair in xs.chunks(2) {
                if let [x0, x1] = pair {
                    let w = x1 - x0;
                    if best.map_or(true, |(bw, _)| w > bw) {
                        best = Some((w, Point2::new(0.5 * (x0 + x1), y)));
                    }
                }
            }
        }
        best.map(|(_, p)| p).unwrap_or(self.vertices[0])
    }

    /// Interiors overlap.
    pub fn interiors_intersect(&self, o: &Polygon) -> bool {
        if !self.bbox().intersects(&o.bbox()) {
            return false;
        }
        for (a, b) in self.edges() {
            for (c, d) in o.edges() {
                if segments_cross_properly(a, b, c, d) {
                    return true;
                }
            }
        }
        self.vertices.iter().any(|&p| o.contains_strict(p))
            || o.vertices.iter().any(|&p| self.contains_strict(p))
            || o.contains_strict(self.interior_point())
            || self.contains_strict(o.interior_point())
            || self.edges().any(|(a, b)| o.contains_strict(a.lerp(b, 0.5)))
    }

    /// Clips against a convex counterclockwise window (Sutherland–Hodgman); returns the area.
    pub fn clipped_area_convex(&self, window: &Polygon) -> f64 {
        let mut pts = self.vertices.clone();
        for (c, d) in window.edges() {
            if pts.is_empty() {
                break;
            }
            let inside = |p: Point2| orient(c, d, p) >= 0.0;
            let mut next = Vec::with_capacity(pts.len() + 2);
            for i in 0..pts.len() {
                let p = pts[i];
                let q = pts[(i + 1) % pts.len()];
                let (ip, iq) = (inside(p), inside(q));
                if ip {
                    next.push(p);
                }
                if ip != iq {
                    let op = orient(c, d, p);
                    let oq = orient(c, d, q);
                    next.push(p.lerp(q, op / (op - oq)));
                }
            }
            pts = next;
        }
        if pts.len() < 3 {
            0.0
        } else {
            signed_area(&pts)
        }
    }
}

impl TryFrom<Vec<Point2>> for Polygon {
    type Error = Error;
    fn try_from(v: Vec<Point2>) -> Result<Self> {
        Polygon::new(v)
    }
}

impl From<Polygon> for Vec<Point2> {
    fn from(p: Polygon) -> Self {
        p.vertices
    }
}

pub fn signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>()
}
