use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{Decoration, Level, PlanarDomain, Point2, Polygon, Polyline};
use crate::metrics::crossing::CrossingOracle;
use crate::metrics::grid::{decoration_grid, GridGraph};
use crate::metrics::paths::{d_alpha, snap_pair};
use crate::metrics::quadrature::{len_alpha_polyline, DEFAULT_TOL};
use crate::par_map;
use crate::slices::census::{census_aggregate, dyadic_census};
use crate::slices::corridor::{corridor_slices, SliceKind};
use crate::slices::region::WsliceDataset;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionRow {
    pub j: u32,
    pub alpha: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "L_prime")]
    pub l_prime: f64,
    /// `len_α` of the midline route.
    pub upper: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<f64>,
    /// Sum over the forced cross-sections of the least in-region length times `δ_sup^{α−1}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    /// `δ^α(y) + δ^α(z) + Σ d_S^α` over the right slices.
    pub sigma_right: f64,
    pub census: f64,
    pub right_slices: usize,
}

impl ObstructionRow {
    pub fn l_sum(&self) -> f64 {
        self.l + self.l_prime
    }

    /// `Σ_α / d_α`, using the grid value when present.
    pub fn sigma_ratio(&self) -> f64 {
        self.sigma_right / self.grid.unwrap_or(self.upper)
    }
}

/// The pair straddling the middle slit halfway along the outermost left part.
pub fn obstruction_pair(d: &Decoration) -> (Point2, Point2) {
    let s = d.sections()[0];
    let x = 0.5 * (s.x0 + s.x1);
    let w = d.w_at(x);
    (d.global(x, 1.5 * w), d.global(x, 0.5 * w))
}

/// Corridor 4 out to the far end, across, and corridor 3 back.
pub fn midline_route(d: &Decoration) -> Result<Polyline> {
    let s = d.sections()[0];
    let x = 0.5 * (s.x0 + s.x1);
    let end = d.total() - 0.5 * d.r_outer();
    let mut v = d.curve(Level { k: 1.5, sign: 1.0 }, x, end);
    let mut back = d.curve(Level { k: 0.5, sign: 1.0 }, x, end);
    back.reverse();
    v.extend(back);
    Polyline::from_path(v)
}

fn subtract(lo: f64, hi: f64, holes: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = vec![(lo, hi)];
    for &(a, b) in holes {
        out = out
            .into_iter()
            .flat_map(|(x0, x1)| {
                let mut v = Vec::new();
                if a > x0 {
                    v.push((x0, a.min(x1)));
                }
                if b < x1 {
                    v.push((b.max(x0), x1));
                }
                v
            })
            .filter(|(x0, x1)| x1 > x0)
            .collect();
    }
    out
}

/// Full-height cross-sections every route between the pair must traverse, pinches removed.
pub fn forced_regions(d: &Decoration) -> Result<Vec<Polygon>> {
    let r_m = d.r_outer();
    let jn = d.junction();
    let big = d.spec.big_r();
    let t = d.total();
    let mut ranges = Vec::new();
    for (lo, hi) in [(2.0 * r_m, jn), (jn, jn + 2.0 * big), (jn + 2.0 * big, t - 2.0 * r_m)] {
        ranges.extend(subtract(lo, hi, d.pinches_local()));
    }
    ranges.into_iter().map(|(a, b)| d.band(a, b, Level::BOTTOM, Level::TOP)).collect()
}

/// Largest `δ` a point of the region can have, from the node values plus one spacing.
fn delta_sup(grid: &GridGraph, shape: &Polygon) -> f64 {
    let bb = shape.bbox();
    let mut best = 0.0f64;
    let mut h = 0.0f64;
    for n in 0..grid.len() as u32 {
        let p = grid.pos(n);
        if bb.contains(p) && shape.contains_closed(p) {
            best = best.max(grid.delta(n));
            h = h.max(grid.h_of(n));
        }
    }
    best.max(0.5 * h) + h
}

pub struct ObstructionProbe<'a> {
    pub domain: &'a PlanarDomain,
    pub j: u32,
    pub y: Point2,
    pub z: Point2,
    grid: Option<GridGraph>,
    /// Least in-region length and `δ_sup` per forced region.
    regions: Vec<(f64, f64)>,
}

impl<'a> ObstructionProbe<'a> {
    /// With `with_grid`, builds the decoration grid and the crossing data for the lower bound.
    pub fn new(domain: &'a PlanarDomain, j: u32, with_grid: bool) -> Result<Self> {
        let d = domain.decoration(j)?;
        let (y, z) = obstruction_pair(d);
        let mut probe = ObstructionProbe { domain, j, y, z, grid: None, regions: Vec::new() };
        if with_grid {
            let grid = decoration_grid(domain, j)?;
            let (sy, sz) = snap_pair(&grid, y, z)?;
            let shapes = forced_regions(d)?;
            probe.regions = par_map(&shapes, |s| {
                let o = CrossingOracle::new(&grid, std::slice::from_ref(s));
                (o.query(sy, sz), delta_sup(&grid, s))
            });
            probe.grid = Some(grid);
        }
        Ok(probe)
    }

    pub fn grid(&self) -> Option<&GridGraph> {
        self.grid.as_ref()
    }

    pub fn row(&self, alpha: f64) -> Result<ObstructionRow> {
        let d = self.domain.decoration(self.j)?;
        let (big, r) = (d.spec.big_r(), d.spec.r());
        let outer = d.spec.outermost();
        let upper = len_alpha_polyline(self.domain, &midline_route(d)?, alpha, DEFAULT_TOL)?;
        let (grid, lower) = match &self.grid {
            Some(g) => {
                let v = d_alpha(g, self.y, self.z, alpha)?.value;
                let lo = self.regions.iter().map(|&(len, ds)| len * ds.powf(alpha - 1.0)).sum();
                (Some(v), Some(lo))
            }
            None => (None, None),
        };
        let right: Vec<_> = corridor_slices(d, SliceKind::Right)?.into_iter().map(|s| s.region).collect();
        let n = right.len();
        let dy = self.domain.distance_to_boundary(self.y)?;
        let dz = self.domain.distance_to_boundary(self.z)?;
        let sigma_right = dy.powf(alpha) + dz.powf(alpha) + right.iter().map(|s| s.d_s.powf(alpha)).sum::<f64>();
        let ds = WsliceDataset::new(self.y, self.z, 10.0, alpha, right)?;
        let census = dy.powf(alpha) + dz.powf(alpha) + census_aggregate(&dyadic_census(&ds, outer.width), outer.width, alpha);
        Ok(ObstructionRow {
            j: self.j,
            alpha,
            l: big * r.powf(alpha - 1.0),
            l_prime: outer.length * outer.width.powf(alpha - 1.0),
            upper,
            grid,
            lower,
            sigma_right,
            census,
            right_slices: n,
        })
    }
}

/// Obstruction rows for one decoration over several exponents.
pub fn obstruction_rows(domain: &PlanarDomain, j: u32, alphas: &[f64], with_grid: bool) -> Result<Vec<ObstructionRow>> {
    let probe = ObstructionProbe::new(domain, j, with_grid)?;
    alphas.iter().map(|&a| probe.row(a)).collect()
}
