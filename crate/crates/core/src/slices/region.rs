use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::primitives::segment_intersection_params;
use crate::geometry::{BoundaryKind, PlanarDomain, Point2, Polygon};

/// A slice `shape ∩ Ω` with its associated size `d_S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceRegion {
    #[serde(rename = "polygon")]
    pub shape: Polygon,
    #[serde(rename = "d_S")]
    pub d_s: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

impl SliceRegion {
    /// Slice with `d_S` set to the measured diameter.
    pub fn measured(domain: &PlanarDomain, shape: Polygon, label: impl Into<String>) -> Result<Self> {
        let d = clipped_diameter(domain, &shape);
        if !(d > 0.0) {
            return Err(Error::SpecInvalid("slice does not meet the domain".into()));
        }
        Ok(SliceRegion { shape, d_s: d, label: label.into() })
    }

    pub fn scaled(&self, t: f64) -> SliceRegion {
        SliceRegion { shape: self.shape.scaled(t), d_s: self.d_s * t, label: self.label.clone() }
    }
}

/// Points whose hull contains `shape ∩ closure(Ω)`: shape vertices in the
/// closure, boundary vertices in the shape, and edge crossings.
fn clipped_support(domain: &PlanarDomain, shape: &Polygon) -> Vec<Point2> {
    let mut pts: Vec<Point2> = shape.vertices().iter().copied().filter(|&p| domain.contains_closed(p)).collect();
    let bb = shape.bbox();
    let mut ts = Vec::new();
    for s in domain.boundary_segments() {
        if s.kind == BoundaryKind::Slit {
            continue;
        }
        let sb = crate::geometry::Rect::new(s.a.x.min(s.b.x), s.a.y.min(s.b.y), s.a.x.max(s.b.x), s.a.y.max(s.b.y));
        if !sb.intersects(&bb) {
            continue;
        }
        for p in [s.a, s.b] {
            if shape.contains_closed(p) {
                pts.push(p);
            }
        }
        for (a, b) in shape.edges() {
            ts.clear();
            segment_intersection_params(a, b, s.a, s.b, &mut ts);
            pts.extend(ts.iter().map(|&t| a.lerp(b, t)));
        }
    }
    pts
}

/// Euclidean diameter of `shape ∩ Ω`; zero when they do not meet.
pub fn clipped_diameter(domain: &PlanarDomain, shape: &Polygon) -> f64 {
    let pts = clipped_support(domain, shape);
    let mut d2 = 0.0f64;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            d2 = d2.max(p.dist2(*q));
        }
    }
    let d = d2.sqrt();
    if d > 0.0 && shape_meets_domain(domain, shape) {
        d
    } else {
        0.0
    }
}

fn shape_meets_domain(domain: &PlanarDomain, shape: &Polygon) -> bool {
    if domain.contains(shape.interior_point()) || shape.vertices().iter().any(|&p| domain.contains(p)) {
        return true;
    }
    // thin overlaps: probe midpoints of shape edges clipped to the domain
    shape.edges().any(|(a, b)| {
        let l = a.dist(b);
        l > 0.0 && domain.clipped_length(a, b) > 0.0 && {
            let n = 64;
            (0..n).any(|k| domain.contains(a.lerp(b, (k as f64 + 0.5) / n as f64)))
        }
    })
}

/// Whether two slices share interior points of the domain.
pub fn slices_overlap(domain: &PlanarDomain, a: &Polygon, b: &Polygon) -> bool {
    if !a.interiors_intersect(b) {
        return false;
    }
    if is_convex(a) && is_convex(b) {
        let cut = a.clipped_area_convex(b);
        if cut <= 0.0 {
            return false;
        }
        if let Some(inter) = convex_intersection(a, b) {
            return domain.clipped_area_convex(&inter) > 0.0;
        }
        return false;
    }
    true
}

pub(crate) fn is_convex(p: &Polygon) -> bool {
    let v = p.vertices();
    let n = v.len();
    (0..n).all(|i| crate::geometry::primitives::orient(v[i], v[(i + 1) % n], v[(i + 2) % n]) >= 0.0)
}

fn convex_intersection(a: &Polygon, b: &Polygon) -> Option<Polygon> {
    let mut out: Vec<Point2> = a.vertices().to_vec();
    for (p, q) in b.edges() {
        if out.is_empty() {
            return None;
        }
        let inp = std::mem::take(&mut out);
        let inside = |x: Point2| crate::geometry::primitives::orient(p, q, x) >= 0.0;
        for i in 0..inp.len() {
            let cur = inp[i];
            let prev = inp[(i + inp.len() - 1) % inp.len()];
            let (ci, pi) = (inside(cur), inside(prev));
            if ci != pi {
                let d1 = crate::geometry::primitives::orient(p, q, prev);
                let d2 = crate::geometry::primitives::orient(p, q, cur);
                out.push(prev.lerp(cur, d1 / (d1 - d2)));
            }
            if ci {
                out.push(cur);
            }
        }
    }
    out.dedup();
    Polygon::new(out).ok()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WsliceDataset {
    pub x: Point2,
    pub y: Point2,
    #[serde(rename = "C")]
    pub c: f64,
    pub alpha: f64,
    pub slices: Vec<SliceRegion>,
}

impl WsliceDataset {
    pub fn new(x: Point2, y: Point2, c: f64, alpha: f64, slices: Vec<SliceRegion>) -> Result<Self> {
        let ds = WsliceDataset { x, y, c, alpha, slices };
        ds.check_parameters()?;
        Ok(ds)
    }

    fn check_parameters(&self) -> Result<()> {
        if !(self.c >= 1.0 && self.c.is_finite()) {
            return Err(Error::SpecInvalid(format!("C = {} must be at least 1", self.c)));
        }
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(Error::SpecInvalid(format!("alpha = {} outside [0,1)", self.alpha)));
        }
        if let Some(s) = self.slices.iter().find(|s| !(s.d_s > 0.0 && s.d_s.is_finite())) {
            return Err(Error::SpecInvalid(format!("slice `{}` has d_S = {}", s.label, s.d_s)));
        }
        Ok(())
    }

    /// Full invariant check against a domain: sizes cover diameters and slices are disjoint.
    pub fn validate(&self, domain: &PlanarDomain, tol: f64) -> Result<()> {
        self.check_parameters()?;
        for s in &self.slices {
            let d = clipped_diameter(domain, &s.shape);
            if d == 0.0 {
                return Err(Error::SpecInvalid(format!("slice `{}` does not meet the domain", s.label)));
            }
            if s.d_s < d - tol {
                return Err(Error::SpecInvalid(format!("slice `{}`: d_S = {} below its diameter {d}", s.label, s.d_s)));
            }
        }
        for (i, a) in self.slices.iter().enumerate() {
            for b in &self.slices[i + 1..] {
                if slices_overlap(domain, &a.shape, &b.shape) {
                    return Err(Error::SpecInvalid(format!("slices `{}` and `{}` overlap", a.label, b.label)));
                }
            }
        }
        Ok(())
    }

    pub fn with_c(&self, c: f64) -> WsliceDataset {
        WsliceDataset { c, ..self.clone() }
    }

    pub fn scaled(&self, t: f64) -> WsliceDataset {
        WsliceDataset { x: self.x * t, y: self.y * t, slices: self.slices.iter().map(|s| s.scaled(t)).collect(), ..self.clone() }
    }
}

pub fn dataset_to_json(ds: &WsliceDataset) -> String {
    crate::json::to_string(ds)
}

pub fn dataset_from_json(s: &str) -> Result<WsliceDataset> {
    let ds: WsliceDataset = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    ds.check_parameters()?;
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rectangle, Rect};

    #[test]
    fn diameter_of_clipped_strip() {
        let d = rectangle(Rect::new(0.0, 0.0, 4.0, 1.0)).unwrap();
        let s = Rect::new(1.0, -5.0, 2.0, 5.0).to_polygon();
        assert!((clipped_diameter(&d, &s) - 2f64.sqrt()).abs() < 1e-15);
        let off = Rect::new(5.0, 0.0, 6.0, 1.0).to_polygon();
        assert_eq!(clipped_diameter(&d, &off), 0.0);
    }

    #[test]
    fn overlap_only_counts_inside_domain() {
        let d = rectangle(Rect::new(0.0, 0.0, 4.0, 1.0)).unwrap();
        let a = Rect::new(1.0, -5.0, 2.0, 5.0).to_polygon();
        let b = Rect::new(1.5, 2.0, 3.0, 3.0).to_polygon();
        let c = Rect::new(1.5, 0.5, 3.0, 3.0).to_polygon();
        assert!(!slices_overlap(&d, &a, &b));
        assert!(slices_overlap(&d, &a, &c));
    }

    #[test]
    fn dataset_round_trip() {
        let d = rectangle(Rect::new(0.0, 0.0, 4.0, 1.0)).unwrap();
        let s = SliceRegion::measured(&d, Rect::new(1.0, -5.0, 2.0, 5.0).to_polygon(), "a").unwrap();
        let ds = WsliceDataset::new(Point2::new(0.5, 0.5), Point2::new(3.5, 0.5), 3.0, 0.0, vec![s]).unwrap();
        ds.validate(&d, 1e-12).unwrap();
        let text = dataset_to_json(&ds);
        let back = dataset_from_json(&text).unwrap();
        assert_eq!(back, ds);
        assert_eq!(dataset_to_json(&back), text);
    }
}
