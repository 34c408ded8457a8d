use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::primitives::point_segment_dist;
use crate::geometry::{Family, Level, PlanarDomain, Point2, Polyline};
use crate::metrics::crossing::min_region_length;
use crate::metrics::grid::{decoration_grid, GridGraph};
use crate::metrics::paths::d_alpha;
use crate::metrics::quadrature::validate_path;
use crate::report::{CheckReport, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessVerdict {
    Impossible,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub j: u32,
    #[serde(rename = "C")]
    pub c: f64,
    pub verdict: WitnessVerdict,
    pub u: Point2,
    pub y: Point2,
    pub z: Point2,
    pub delta_u: f64,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    /// Least length inside the corridor 1 and 4 cross-sections at the apex abscissa.
    pub forced_crossing: f64,
    pub k_uy: f64,
    /// Distance from `u` to the explicit avoiding path.
    pub avoid_distance: f64,
    pub avoiding_path: Polyline,
    pub report: CheckReport,
}

/// Path from `y` to `z` around the far side of the decoration, away from the apex of corridor 4.
pub fn avoiding_path(domain: &PlanarDomain, j: u32) -> Result<Polyline> {
    let d = domain.decoration(j)?;
    let big = d.spec.big_r();
    let r_m = d.r_outer();
    let end = d.total() - 0.5 * r_m;
    let c4 = Level { k: 1.5, sign: 1.0 };
    let c1 = Level { k: 1.5, sign: -1.0 };
    let c2 = Level { k: 0.5, sign: -1.0 };
    let c3 = Level { k: 0.5, sign: 1.0 };
    let mut v = d.curve(c4, 0.0, big);
    v.reverse();
    v.extend(d.curve(c1, 0.0, end));
    let mut back = d.curve(c2, 1.5 * r_m, end);
    back.reverse();
    v.extend(back);
    v.extend(d.curve(c3, 1.5 * r_m, big));
    Polyline::from_path(v)
}

/// The apex obstruction: every slice through `u` must be large, yet `u` sits close to the boundary.
pub fn slice_failure_witness(domain: &PlanarDomain, j: u32, c: f64) -> Result<Witness> {
    let grid = decoration_grid(domain, j)?;
    slice_failure_witness_on(domain, &grid, j, c)
}

pub fn slice_failure_witness_on(domain: &PlanarDomain, grid: &GridGraph, j: u32, c: f64) -> Result<Witness> {
    let d = domain.decoration(j)?;
    if d.spec.family != Family::Ex32 {
        return Err(Error::WrongFamily { expected: "ex32" });
    }
    if !(c >= 1.0) {
        return Err(Error::SpecInvalid(format!("C = {c} must be at least 1")));
    }
    let big = d.spec.big_r();
    let r = d.spec.r();
    let u = d.midline_point(4, 2.0 * big)?;
    let y = d.midline_point(4, big)?;
    let z = d.midline_point(3, big)?;
    let delta_u = domain.distance_to_boundary(u)?;
    let mut rep = CheckReport::new();

    let eps = 0.25 * r;
    let sections = vec![
        d.band(2.0 * big - eps, 2.0 * big + eps, Level::UPPER_MID, Level::TOP)?,
        d.band(2.0 * big - eps, 2.0 * big + eps, Level::BOTTOM, Level::LOWER_MID)?,
    ];
    let forced = min_region_length(grid, &sections, y, z)?.value;
    rep.push("forced_apex_crossing", None, Verdict::from_bool(forced > 0.0), true, &[("min_length", forced), ("half_width", eps)]);

    let k_uy = d_alpha(grid, u, y, 0.0)?.value;
    rep.push("k_u_y", None, Verdict::Info, false, &[("k", k_uy)]);

    let path = avoiding_path(domain, j)?;
    validate_path(domain, &path)?;
    let avoid = path.segments().map(|(a, b)| point_segment_dist(u, a, b)).fold(f64::INFINITY, f64::min);
    rep.push("avoiding_path", None, Verdict::from_bool(avoid > big), true, &[("distance_to_u", avoid), ("R", big)]);
    rep.push("delta_u_below_r", None, Verdict::from_bool(delta_u < r), true, &[("delta_u", delta_u), ("r", r)]);

    let arithmetic = big / (2.0 * c) > r;
    rep.push("size_forces_contradiction", None, Verdict::Info, false, &[("R_over_2C", big / (2.0 * c)), ("r", r)]);
    let verdict = if arithmetic && rep.overall { WitnessVerdict::Impossible } else { WitnessVerdict::Inconclusive };
    Ok(Witness { j, c, verdict, u, y, z, delta_u, r, big_r: big, forced_crossing: forced, k_uy, avoid_distance: avoid, avoiding_path: path, report: rep })
}
