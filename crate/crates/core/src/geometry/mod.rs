//! Slit polygonal domains and the decoration builders.

pub mod decoration;
pub mod domain;
pub mod io;
pub mod primitives;
pub mod spec;

pub use decoration::{Decoration, DecorationLandmarks, DecorationSpec, Family, Level, Part};
pub use domain::{BoundaryKind, BoundarySegment, PlanarDomain};
pub use io::{domain_from_json, domain_to_json, DomainFile};
pub use primitives::{Point2, Polygon, Polyline, Rect};
pub use spec::{AllowableQuadruple, CorridorDesign, CorridorLaw, DecoratedSquareSpec, Placement, RModifier, ScaleLaw, Slot};

use crate::error::Result;

pub fn contains(domain: &PlanarDomain, pt: Point2) -> bool {
    domain.contains(pt)
}

pub fn distance_to_boundary(domain: &PlanarDomain, pt: Point2) -> Result<f64> {
    domain.distance_to_boundary(pt)
}

pub fn segment_blocked(domain: &PlanarDomain, a: Point2, b: Point2) -> Result<bool> {
    domain.segment_blocked(a, b)
}

pub fn build_domain(spec: &DecoratedSquareSpec) -> Result<PlanarDomain> {
    spec.build()
}

pub fn corridor_midline(domain: &PlanarDomain, j: u32, corridor: u8) -> Result<Polyline> {
    let d = domain
        .decoration(j)
        .map_err(|_| crate::error::Error::NoSuchCorridor { j, corridor })?;
    d.midline(corridor)
}

/// Axis-aligned rectangle as a domain.
pub fn rectangle(r: Rect) -> Result<PlanarDomain> {
    PlanarDomain::new(vec![r.to_polygon()], vec![], vec![])
}
