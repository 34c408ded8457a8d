use rstar::{PointDistance, RTree, RTreeObject, AABB};

use super::decoration::{Decoration, DecorationLandmarks};
use super::primitives::{point_segment_dist, segments_intersect, Point2, Polygon, Polyline, Rect};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Outer,
    Hole,
    Slit,
}

#[derive(Clone, Copy, Debug)]
pub struct BoundarySegment {
    pub a: Point2,
    pub b: Point2,
    pub kind: BoundaryKind,
}

impl RTreeObject for BoundarySegment {
    type Envelope = AABB<[f64; 2]>;
    fn envelope(&self) -> Self::Envelope {
        AABB::from_corners([self.a.x, self.a.y], [self.b.x, self.b.y])
    }
}

impl PointDistance for BoundarySegment {
    fn distance_2(&self, p: &[f64; 2]) -> f64 {
        let d = point_segment_dist(Point2::new(p[0], p[1]), self.a, self.b);
        d * d
    }
}

/// Open region: interiors of the outer polygons, minus closed holes and slits.
#[derive(Clone, Debug)]
pub struct PlanarDomain {
    outer: Vec<Polygon>,
    holes: Vec<Polygon>,
    slits: Vec<Polyline>,
    decorations: Vec<Decoration>,
    index: RTree<BoundarySegment>,
    bbox: Rect,
}

impl PartialEq for PlanarDomain {
    fn eq(&self, o: &Self) -> bool {
        self.outer == o.outer && self.holes == o.holes && self.slits == o.slits && self.landmarks() == o.landmarks()
    }
}

impl PlanarDomain {
    /// Validates structure; connectivity is checked separately by [`PlanarDomain::check_connected`].
    pub fn new(outer: Vec<Polygon>, holes: Vec<Polygon>, slits: Vec<Polyline>) -> Result<Self> {
        Self::with_decorations(outer, holes, slits, Vec::new())
    }

    pub(crate) fn with_decorations(outer: Vec<Polygon>, holes: Vec<Polygon>, slits: Vec<Polyline>, decorations: Vec<Decoration>) -> Result<Self> {
        if outer.is_empty() {
            return Err(Error::SpecInvalid("domain needs at least one outer polygon".into()));
        }
        for (i, a) in outer.iter().enumerate() {
            for b in &outer[i + 1..] {
                if a.interiors_intersect(b) {
                    return Err(Error::SpecInvalid("outer polygons overlap".into()));
                }
            }
        }
        for (i, h) in holes.iter().enumerate() {
            let p = h.interior_point();
            if !outer.iter().any(|o| o.contains_strict(p)) {
                return Err(Error::SpecInvalid(format!("hole {i} lies outside the outer region")));
            }
            if h.vertices().iter().any(|&v| !outer.iter().any(|o| o.contains_closed(v))) {
                return Err(Error::SpecInvalid(format!("hole {i} leaves the outer region")));
            }
            for g in &holes[i + 1..] {
                if h.interiors_intersect(g) {
                    return Err(Error::SpecInvalid("holes overlap".into()));
                }
            }
        }
        for (i, s) in slits.iter().enumerate() {
            if s.vertices().len() < 2 || !s.is_simple() {
                return Err(Error::SpecInvalid(format!("slit {i} is not a simple polyline")));
            }
            if s.vertices().iter().any(|&v| !outer.iter().any(|o| o.contains_closed(v))) {
                return Err(Error::SpecInvalid(format!("slit {i} leaves the closure of the outer region")));
            }
        }
        let mut segs = Vec::new();
        for p in &outer {
            segs.extend(p.edges().map(|(a, b)| BoundarySegment { a, b, kind: BoundaryKind::Outer }));
        }
        for p in &holes {
            segs.extend(p.edges().map(|(a, b)| BoundarySegment { a, b, kind: BoundaryKind::Hole }));
        }
        for s in &slits {
            segs.extend(s.segments().map(|(a, b)| BoundarySegment { a, b, kind: BoundaryKind::Slit }));
        }
        let bbox = outer.iter().map(|p| p.bbox()).reduce(|a, b| a.union(&b)).unwrap();
        Ok(PlanarDomain { outer, holes, slits, decorations, index: RTree::bulk_load(segs), bbox })
    }

    pub fn outer(&self) -> &[Polygon] {
        &self.outer
    }

    pub fn holes(&self) -> &[Polygon] {
        &self.holes
    }

    pub fn slits(&self) -> &[Polyline] {
        &self.slits
    }

    pub fn decorations(&self) -> &[Decoration] {
        &self.decorations
    }

    pub fn decoration(&self, j: u32) -> Result<&Decoration> {
        self.decorations.iter().find(|d| d.spec.j == j).ok_or(Error::NoSuchDecoration(j))
    }

    pub fn landmarks(&self) -> Vec<DecorationLandmarks> {
        self.decorations.iter().map(Decoration::landmarks).collect()
    }

    pub fn bbox(&self) -> Rect {
        self.bbox
    }

    pub fn boundary_segments(&self) -> impl Iterator<Item = &BoundarySegment> {
        self.index.iter()
    }

    /// Distance to the nearest boundary piece, defined everywhere.
    pub fn raw_delta(&self, p: Point2) -> f64 {
        self.index
            .nearest_neighbor(&[p.x, p.y])
            .map(|s| point_segment_dist(p, s.a, s.b))
            .unwrap_or(f64::INFINITY)
    }

    fn in_region(&self, p: Point2) -> bool {
        self.outer.iter().any(|o| o.contains_raw(p)) && !self.holes.iter().any(|h| h.contains_raw(p))
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.is_finite() && self.bbox.contains(p) && self.raw_delta(p) > 0.0 && self.in_region(p)
    }

    /// Closure of the region (slits are part of it).
    pub fn contains_closed(&self, p: Point2) -> bool {
        self.outer.iter().any(|o| o.contains_closed(p)) && !self.holes.iter().any(|h| h.contains_strict(p))
    }

    pub fn distance_to_boundary(&self, p: Point2) -> Result<f64> {
        if !p.is_finite() || !self.bbox.contains(p) {
            return Err(Error::PointOutsideDomain(p));
        }
        let d = self.raw_delta(p);
        if d > 0.0 && self.in_region(p) {
            Ok(d)
        } else {
            Err(Error::PointOutsideDomain(p))
        }
    }

    /// Whether the closed segment between two domain points touches the boundary.
    pub fn segment_blocked(&self, a: Point2, b: Point2) -> Result<bool> {
        if !self.contains(a) {
            return Err(Error::PointOutsideDomain(a));
        }
        if !self.contains(b) {
            return Err(Error::PointOutsideDomain(b));
        }
        Ok(self.segment_hits_boundary(a, b))
    }

    /// Exact segment test without membership checks.
    pub fn segment_hits_boundary(&self, a: Point2, b: Point2) -> bool {
        let env = AABB::from_corners([a.x.min(b.x), a.y.min(b.y)], [a.x.max(b.x), a.y.max(b.y)]);
        self.index.locate_in_envelope_intersecting(&env).any(|s| segments_intersect(a, b, s.a, s.b))
    }

    /// Interior x-intervals of the row at height `y` (slits ignored).
    pub fn row_intervals(&self, y: f64) -> Vec<(f64, f64)> {
        let mut xs = Vec::new();
        for p in self.outer.iter().chain(&self.holes) {
            let b = p.bbox();
            if y < b.min.y || y > b.max.y {
                continue;
            }
            for (a, c) in p.edges() {
                if (a.y > y) != (c.y > y) {
                    xs.push(a.x + (y - a.y) * (c.x - a.x) / (c.y - a.y));
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        xs.chunks_exact(2).map(|c| (c[0], c[1])).collect()
    }

    /// Brute-force distance over all boundary pieces; used as an oracle.
    pub fn brute_delta(&self, p: Point2) -> f64 {
        let mut d = f64::INFINITY;
        for poly in self.outer.iter().chain(&self.holes) {
            d = d.min(poly.boundary_dist(p));
        }
        for s in &self.slits {
            for (a, b) in s.segments() {
                d = d.min(point_segment_dist(p, a, b));
            }
        }
        d
    }

    /// Length of the segment inside the closed region.
    pub fn clipped_length(&self, a: Point2, b: Point2) -> f64 {
        let l = a.dist(b);
        let mut total = 0.0;
        for o in &self.outer {
            for (t0, t1) in o.clip_segment(a, b) {
                let mut len = (t1 - t0) * l;
                let (p, q) = (a.lerp(b, t0), a.lerp(b, t1));
                for h in &self.holes {
                    len -= h.clipped_length(p, q);
                }
                total += len.max(0.0);
            }
        }
        total
    }

    /// Area of `shape ∩ region` for a convex window.
    pub fn clipped_area_convex(&self, window: &Polygon) -> f64 {
        let a: f64 = self.outer.iter().map(|o| o.clipped_area_convex(window)).sum();
        let h: f64 = self.holes.iter().map(|o| o.clipped_area_convex(window)).sum();
        (a - h).max(0.0)
    }

    /// Flood fill on the lattice of spacing `h` over `window`; true when one component remains.
    pub fn check_connected(&self, window: Rect, h: f64) -> Result<bool> {
        let g = crate::metrics::grid::GridGraph::build_unchecked(self, &[crate::metrics::grid::PatchSpec { window, h }])?;
        Ok(g.component_count() == 1)
    }

    pub fn scaled(&self, t: f64) -> Result<PlanarDomain> {
        let outer = self.outer.iter().map(|p| p.scaled(t)).collect();
        let holes = self.holes.iter().map(|p| p.scaled(t)).collect();
        let slits = self
            .slits
            .iter()
            .map(|s| Polyline::new(s.vertices().iter().map(|&p| p * t).collect()))
            .collect::<Result<_>>()?;
        PlanarDomain::new(outer, holes, slits)
    }
}
