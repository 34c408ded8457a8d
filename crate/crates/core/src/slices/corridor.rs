use serde::{Deserialize, Serialize};

use super::region::{SliceRegion, WsliceDataset};
use crate::error::{Error, Result};
use crate::geometry::decoration::{cycle_coord, SectionKind};
use crate::geometry::{Decoration, Level, PlanarDomain, Point2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SliceKind {
    Left,
    Upper,
    Lower,
    Right,
}

impl SliceKind {
    pub const ALL: [SliceKind; 4] = [SliceKind::Left, SliceKind::Upper, SliceKind::Lower, SliceKind::Right];

    pub fn name(self) -> &'static str {
        match self {
            SliceKind::Left => "left",
            SliceKind::Upper => "upper",
            SliceKind::Lower => "lower",
            SliceKind::Right => "right",
        }
    }

    /// Corridors a slice of this kind cuts.
    pub fn corridors(self) -> &'static [u8] {
        match self {
            SliceKind::Left | SliceKind::Right => &[1, 2, 3, 4],
            SliceKind::Upper => &[3, 4],
            SliceKind::Lower => &[1, 2],
        }
    }

    fn levels(self) -> (Level, Level) {
        match self {
            SliceKind::Left | SliceKind::Right => (Level::BOTTOM, Level::TOP),
            SliceKind::Upper => (Level::UPPER_BASE, Level::TOP),
            SliceKind::Lower => (Level::BOTTOM, Level::LOWER_BASE),
        }
    }
}

/// A corridor slice together with its local x-range.
#[derive(Clone, Debug, PartialEq)]
pub struct CorridorSlice {
    pub kind: SliceKind,
    pub x0: f64,
    pub x1: f64,
    pub region: SliceRegion,
}

fn split(x0: f64, x1: f64, n: usize, out: &mut Vec<(f64, f64)>) {
    let n = n.max(1);
    for k in 0..n {
        let a = x0 + (x1 - x0) * k as f64 / n as f64;
        let b = if k + 1 == n { x1 } else { x0 + (x1 - x0) * (k + 1) as f64 / n as f64 };
        out.push((a, b));
    }
}

/// Local x-ranges of the slices of one kind.
pub fn slice_ranges(d: &Decoration, kind: SliceKind) -> Vec<(f64, f64)> {
    let r_m = d.r_outer();
    let j = d.junction();
    let t = d.total();
    let equal = d.spec.layers.iter().all(|l| l.width == d.spec.diagonal.width);
    let gap = if equal { 0.0 } else { d.spec.layers[0].width };
    let mut out = Vec::new();
    match kind {
        SliceKind::Upper | SliceKind::Lower => {
            let n = (d.spec.big_r() / d.spec.r()).floor() as usize;
            split(j, j + 2.0 * d.spec.big_r(), 2 * n, &mut out);
        }
        SliceKind::Left | SliceKind::Right => {
            let (lo, hi) = if kind == SliceKind::Left { (2.0 * r_m, j - gap) } else { (t - j + gap, t - r_m) };
            for s in d.sections() {
                let SectionKind::Layer(i) = s.kind else { continue };
                let (a, b) = (s.x0.max(lo), s.x1.min(hi));
                if b <= a {
                    continue;
                }
                let part = d.spec.layers[i];
                split(a, b, (part.length / part.width).floor() as usize, &mut out);
            }
        }
    }
    out
}

pub fn corridor_slices(d: &Decoration, kind: SliceKind) -> Result<Vec<CorridorSlice>> {
    let (lo, hi) = kind.levels();
    slice_ranges(d, kind)
        .into_iter()
        .enumerate()
        .map(|(k, (x0, x1))| {
            let shape = d.band(x0, x1, lo, hi)?;
            // the band lies in the closure of the domain, so its diameter is that of its vertices
            let v = shape.vertices();
            let mut d2 = 0.0f64;
            for (i, p) in v.iter().enumerate() {
                for q in &v[i + 1..] {
                    d2 = d2.max(p.dist2(*q));
                }
            }
            let label = format!("{}{}-{}", kind.name(), d.j(), k);
            Ok(CorridorSlice { kind, x0, x1, region: SliceRegion { shape, d_s: d2.sqrt(), label } })
        })
        .collect()
}

pub fn make_corridor_slices(domain: &PlanarDomain, j: u32, kind: SliceKind) -> Result<Vec<SliceRegion>> {
    let d = domain.decoration(j)?;
    Ok(corridor_slices(d, kind)?.into_iter().map(|s| s.region).collect())
}

/// Every corridor slice of a decoration, in the order left, upper, lower, right.
pub fn all_corridor_slices(d: &Decoration) -> Result<Vec<CorridorSlice>> {
    let mut v = Vec::new();
    for k in SliceKind::ALL {
        v.extend(corridor_slices(d, k)?);
    }
    Ok(v)
}

/// Where a point sits on the corridor cycle, after the membership checks.
pub fn locate(domain: &PlanarDomain, d: &Decoration, p: Point2) -> Result<f64> {
    if !domain.contains(p) {
        return Err(Error::PointsNotInDecoration(d.j()));
    }
    let s = d.cycle_pos(p).ok_or(Error::PointsNotInDecoration(d.j()))?;
    let (x, _) = d.local(p);
    let floor = 0.25 * d.w_at(x);
    if domain.raw_delta(p) < floor {
        return Err(Error::TooCloseToBoundary(floor));
    }
    Ok(s)
}

/// Whether a slice cuts both arcs of the cycle between the two positions and stays clear of both points.
pub fn separates(d: &Decoration, s: &CorridorSlice, pts: [Point2; 2], cyc: [f64; 2]) -> bool {
    let (lo, hi) = if cyc[0] <= cyc[1] { (cyc[0], cyc[1]) } else { (cyc[1], cyc[0]) };
    let t = d.total();
    let mut inner = false;
    let mut outer = false;
    for &c in s.kind.corridors() {
        let a = cycle_coord(c, s.x0, t);
        let b = cycle_coord(c, s.x1, t);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if a > lo && b < hi {
            inner = true;
        } else if b < lo || a > hi {
            outer = true;
        }
    }
    let clear = pts.iter().all(|&p| {
        let (x, _) = d.local(p);
        !s.region.shape.contains_closed(p) && s.region.shape.boundary_dist(p) >= d.w_at(x)
    });
    inner && outer && clear
}

/// The corridor slices separating `x` from `y` while keeping a corridor width away from both.
pub fn admissible_for_pair(domain: &PlanarDomain, j: u32, x: Point2, y: Point2) -> Result<WsliceDataset> {
    let d = domain.decoration(j)?;
    admissible_from(domain, d, &all_corridor_slices(d)?, x, y)
}

/// As [`admissible_for_pair`] over a precomputed slice list.
pub fn admissible_from(domain: &PlanarDomain, d: &Decoration, slices: &[CorridorSlice], x: Point2, y: Point2) -> Result<WsliceDataset> {
    let sx = locate(domain, d, x)?;
    let sy = locate(domain, d, y)?;
    let chosen = if x == y {
        Vec::new()
    } else {
        slices.iter().filter(|s| separates(d, s, [x, y], [sx, sy])).map(|s| s.region.clone()).collect()
    };
    WsliceDataset::new(x, y, 10.0, 0.0, chosen)
}

/// Indices into `slices` of the admissible ones.
pub fn admissible_indices(domain: &PlanarDomain, d: &Decoration, slices: &[CorridorSlice], x: Point2, y: Point2) -> Result<Vec<usize>> {
    let sx = locate(domain, d, x)?;
    let sy = locate(domain, d, y)?;
    if x == y {
        return Ok(Vec::new());
    }
    Ok((0..slices.len()).filter(|&i| separates(d, &slices[i], [x, y], [sx, sy])).collect())
}
