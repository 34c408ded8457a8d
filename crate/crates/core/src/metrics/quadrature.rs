use super::paths::{check_alpha, weight_factor};
use crate::error::{Error, Result};
use crate::geometry::{PlanarDomain, Point2, Polygon, Polyline};

pub const DEFAULT_TOL: f64 = 1e-8;

/// Checks that every vertex lies in the domain and no segment touches the boundary.
pub fn validate_path(domain: &PlanarDomain, path: &Polyline) -> Result<()> {
    for &v in path.vertices() {
        if !domain.contains(v) {
            return Err(Error::PathExitsDomain(v));
        }
    }
    for (a, b) in path.segments() {
        if domain.segment_hits_boundary(a, b) {
            return Err(Error::PathExitsDomain(a.lerp(b, 0.5)));
        }
    }
    Ok(())
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let both = left + right;
    if depth == 0 || (both - whole).abs() <= 15.0 * tol * both.abs() {
        return both + (both - whole) / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, tol, depth - 1)
}

/// `∫ δ^{α−1} ds` along a segment already known to lie in the domain.
pub fn segment_len_alpha(domain: &PlanarDomain, a: Point2, b: Point2, alpha: f64, tol: f64) -> f64 {
    let len = a.dist(b);
    if len == 0.0 {
        return 0.0;
    }
    if alpha == 1.0 {
        return len;
    }
    let da = domain.raw_delta(a);
    let db = domain.raw_delta(b);
    // pieces on the scale of the local boundary distance resolve nearby corners
    let pieces = (len / (0.5 * da.min(db))).ceil().clamp(1.0, 20_000.0) as usize;
    let f = |t: f64| weight_factor(domain.raw_delta(a.lerp(b, t)), alpha);
    let mut total = 0.0;
    let mut f0 = weight_factor(da, alpha);
    for k in 0..pieces {
        let t0 = k as f64 / pieces as f64;
        let t1 = (k + 1) as f64 / pieces as f64;
        let f1 = if k + 1 == pieces { weight_factor(db, alpha) } else { f(t1) };
        let fm = f(0.5 * (t0 + t1));
        let whole = simpson(f0, fm, f1, t1 - t0);
        total += adaptive(&f, t0, t1, f0, fm, f1, whole, tol, 40);
        f0 = f1;
    }
    total * len
}

/// Subhyperbolic length of a path in the domain.
pub fn len_alpha_polyline(domain: &PlanarDomain, path: &Polyline, alpha: f64, tol: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(tol > 0.0) {
        return Err(Error::SpecInvalid(format!("quadrature tolerance {tol} must be positive")));
    }
    validate_path(domain, path)?;
    Ok(path.segments().map(|(a, b)| segment_len_alpha(domain, a, b, alpha, tol)).sum())
}

/// `len_α` of the part of a path inside a polygon.
pub fn len_alpha_in_polygon(domain: &PlanarDomain, path: &Polyline, shape: &Polygon, alpha: f64, tol: f64) -> f64 {
    let mut total = 0.0;
    for (a, b) in path.segments() {
        for (t0, t1) in shape.clip_segment(a, b) {
            total += segment_len_alpha(domain, a.lerp(b, t0), a.lerp(b, t1), alpha, tol);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rectangle, Rect};

    #[test]
    fn constant_delta_corridor() {
        let w = 0.2;
        let d = rectangle(Rect::new(0.0, 0.0, 10.0, w)).unwrap();
        let path = Polyline::new(vec![Point2::new(2.0, 0.1), Point2::new(7.0, 0.1)]).unwrap();
        let k = len_alpha_polyline(&d, &path, 0.0, 1e-10).unwrap();
        assert!((k - 2.0 * 5.0 / w).abs() < 1e-9 * k);
        let h = len_alpha_polyline(&d, &path, 0.5, 1e-10).unwrap();
        assert!((h - 5.0 * (2.0 / w).sqrt()).abs() < 1e-9 * h);
        assert_eq!(len_alpha_polyline(&d, &path, 1.0, 1e-10).unwrap(), 5.0);
    }

    #[test]
    fn vertical_half_plane_like() {
        // δ = y near the bottom edge of a wide rectangle: ∫ dy / y = ln(b/a)
        let d = rectangle(Rect::new(-100.0, 0.0, 100.0, 100.0)).unwrap();
        let path = Polyline::new(vec![Point2::new(0.0, 0.1), Point2::new(0.0, 0.5)]).unwrap();
        let k = len_alpha_polyline(&d, &path, 0.0, 1e-10).unwrap();
        assert!((k - 5f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn exiting_path_rejected() {
        let d = rectangle(Rect::new(0.0, 0.0, 1.0, 1.0)).unwrap();
        let path = Polyline::new(vec![Point2::new(0.5, 0.5), Point2::new(1.5, 0.5)]).unwrap();
        assert!(matches!(len_alpha_polyline(&d, &path, 0.0, 1e-8), Err(Error::PathExitsDomain(_))));
    }
}
