use super::quadrature::{len_alpha_polyline, validate_path, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::geometry::{PlanarDomain, Polyline};
use crate::report::{CheckReport, Verdict};

const MAX_SAMPLES: usize = 1_000_000;

/// Arclength positions at the vertices and at steps no longer than a quarter of the smallest δ seen.
fn cigar_samples(domain: &PlanarDomain, path: &Polyline) -> (Vec<f64>, f64) {
    let mut vert_s = vec![0.0];
    for (a, b) in path.segments() {
        let last = *vert_s.last().unwrap();
        vert_s.push(last + a.dist(b));
    }
    let len = *vert_s.last().unwrap();
    let mut min_delta = path.vertices().iter().map(|&v| domain.raw_delta(v)).fold(f64::INFINITY, f64::min);
    let mut samples = Vec::new();
    for _ in 0..8 {
        let step = 0.25 * min_delta;
        let n = ((len / step).ceil() as usize).clamp(1, MAX_SAMPLES);
        samples = (0..=n).map(|k| len * k as f64 / n as f64).chain(vert_s.iter().copied()).collect();
        samples.sort_by(f64::total_cmp);
        samples.dedup();
        let m = samples.iter().map(|&s| domain.raw_delta(path.point_at(s))).fold(f64::INFINITY, f64::min);
        if m >= min_delta || n == MAX_SAMPLES {
            min_delta = min_delta.min(m);
            break;
        }
        min_delta = m;
    }
    (samples, min_delta)
}

/// Bounded turning and cigar conditions, plus the measured ratio against the length bound.
pub fn check_uniform_path(domain: &PlanarDomain, path: &Polyline, c: f64, alpha: f64) -> Result<CheckReport> {
    if !(c >= 1.0) {
        return Err(Error::SpecInvalid(format!("C = {c} must be at least 1")));
    }
    validate_path(domain, path)?;
    let mut rep = CheckReport::new();
    let x = path.start();
    let y = path.end();
    let len = path.length();
    let dxy = x.dist(y);
    rep.push(
        "bounded_turning",
        None,
        Verdict::from_bool(len <= c * dxy * (1.0 + 1e-12) + 1e-12),
        true,
        &[("length", len), ("chord", dxy), ("bound", c * dxy)],
    );

    let mut worst = 0.0f64;
    let mut ok = true;
    let (samples, min_delta) = if path.vertices().len() > 1 { cigar_samples(domain, path) } else { (vec![0.0], domain.raw_delta(x)) };
    for &s in &samples {
        let d = domain.raw_delta(path.point_at(s));
        let t = s.min(len - s).max(0.0);
        worst = worst.max(t / d);
        if t > c * d + 1e-12 {
            ok = false;
        }
    }
    rep.push(
        "cigar",
        None,
        Verdict::from_bool(ok),
        true,
        &[("max_ratio", worst), ("samples", samples.len() as f64), ("min_delta", min_delta)],
    );

    let la = len_alpha_polyline(domain, path, alpha, DEFAULT_TOL)?;
    let (dx, dy) = (domain.raw_delta(x), domain.raw_delta(y));
    if alpha == 0.0 {
        let bound = 4.0 * c * c * (1.0 + dxy / dx.min(dy)).ln();
        let ratio = if bound > 0.0 { la / bound } else { 0.0 };
        rep.push("length_bound", None, Verdict::Info, false, &[("len_alpha", la), ("bound", bound), ("ratio", ratio)]);
    } else {
        let scale = dx.max(dy).max(dxy).powf(alpha);
        rep.push("length_bound", None, Verdict::Info, false, &[("len_alpha", la), ("scale", scale), ("fitted_constant", la / scale)]);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rectangle, Point2, Rect};

    #[test]
    fn diameters_of_square_are_uniform() {
        let d = rectangle(Rect::new(0.0, 0.0, 1.0, 1.0)).unwrap();
        for (a, b) in [((0.001, 0.5), (0.999, 0.5)), ((0.001, 0.001), (0.999, 0.999))] {
            let p = Polyline::new(vec![Point2::new(a.0, a.1), Point2::new(b.0, b.1)]).unwrap();
            let r = check_uniform_path(&d, &p, 2.0, 0.0).unwrap();
            assert!(r.overall, "{r:?}");
        }
    }

    #[test]
    fn doubling_back_fails_bounded_turning() {
        let d = rectangle(Rect::new(0.0, 0.0, 10.0, 1.0)).unwrap();
        // length 10 · |x − y|
        let p = Polyline::new(vec![Point2::new(1.0, 0.5), Point2::new(3.75, 0.5), Point2::new(1.5, 0.5)]).unwrap();
        assert!((p.length() - 10.0 * 0.5).abs() < 1e-12);
        let r = check_uniform_path(&d, &p, 2.0, 0.0).unwrap();
        assert!(!r.condition_passed("bounded_turning"));
    }

    #[test]
    fn constant_path_is_uniform() {
        let d = rectangle(Rect::new(0.0, 0.0, 1.0, 1.0)).unwrap();
        let p = Polyline::constant(Point2::new(0.3, 0.3));
        assert!(check_uniform_path(&d, &p, 1.0, 0.5).unwrap().overall);
    }
}
