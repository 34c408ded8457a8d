//! Standalone SVG figures of domains, slices and paths.
//!
//! Decorations are tiny next to the square, so every figure has an explicit
//! view window and coordinates are mapped into a 1000-unit canvas before
//! printing; renderers work in single precision.

use std::fmt::Write;

use crate::geometry::{PlanarDomain, Point2, Polygon, Polyline, Rect};

const CANVAS: f64 = 1000.0;

#[derive(Clone, Debug, Default)]
pub struct Figure {
    pub slices: Vec<Polygon>,
    pub paths: Vec<Polyline>,
    pub points: Vec<Point2>,
    pub title: Option<String>,
}

struct View {
    origin: Point2,
    top: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl View {
    fn new(r: Rect) -> View {
        let span = r.width().max(r.height()).max(f64::MIN_POSITIVE);
        let scale = CANVAS / span;
        View { origin: r.min, top: r.max.y, scale, width: r.width() * scale, height: r.height() * scale }
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        ((p.x - self.origin.x) * self.scale, (self.top - p.y) * self.scale)
    }

    fn path_data(&self, pts: &[Point2], close: bool) -> String {
        let mut s = String::new();
        for (i, &p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(s, "{}{:.4},{:.4} ", if i == 0 { 'M' } else { 'L' }, x, y);
        }
        if close {
            s.push('Z');
        }
        s
    }
}

/// Whole domain when `view` is `None`.
pub fn render(domain: &PlanarDomain, view: Option<Rect>, fig: &Figure) -> String {
    let v = View::new(view.unwrap_or_else(|| domain.bbox()));
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {:.4} {:.4}" width="{:.0}" height="{:.0}">"#,
        v.width,
        v.height,
        v.width.max(1.0),
        v.height.max(1.0)
    );
    if let Some(t) = &fig.title {
        let _ = writeln!(s, "<title>{}</title>", t.replace('&', "&amp;").replace('<', "&lt;"));
    }
    let mut d = String::new();
    for p in domain.outer().iter().chain(domain.holes()) {
        d.push_str(&v.path_data(p.vertices(), true));
    }
    let _ = writeln!(s, r##"<path d="{d}" fill="#e8e8e8" fill-rule="evenodd" stroke="#333" stroke-width="1" vector-effect="non-scaling-stroke"/>"##);
    for sl in domain.slits() {
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="none" stroke="#c0392b" stroke-width="1.5" vector-effect="non-scaling-stroke"/>"##,
            v.path_data(sl.vertices(), false)
        );
    }
    for p in &fig.slices {
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="#2e86c1" fill-opacity="0.3" stroke="#2e86c1" stroke-width="0.5" vector-effect="non-scaling-stroke"/>"##,
            v.path_data(p.vertices(), true)
        );
    }
    for p in &fig.paths {
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="none" stroke="#27ae60" stroke-width="1.5" vector-effect="non-scaling-stroke"/>"##,
            v.path_data(p.vertices(), false)
        );
    }
    for &p in &fig.points {
        let (x, y) = v.map(p);
        let _ = writeln!(s, r##"<circle cx="{x:.4}" cy="{y:.4}" r="4" fill="#111"/>"##);
    }
    s.push_str("</svg>\n");
    s
}

/// View of one decoration with a margin of a few outer corridor widths.
pub fn decoration_view(domain: &PlanarDomain, j: u32) -> crate::Result<Rect> {
    let d = domain.decoration(j)?;
    Ok(d.bbox().expand(4.0 * d.r_outer()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DecoratedSquareSpec;

    #[test]
    fn decoration_figure_is_well_formed() {
        let dom = DecoratedSquareSpec::ex32(&[2]).unwrap().build().unwrap();
        let s = render(&dom, Some(decoration_view(&dom, 2).unwrap()), &Figure::default());
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<path").count(), 1 + dom.slits().len());
    }
}
