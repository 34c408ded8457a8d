//! Corridor decorations attached to the right side of the unit square.
//!
//! Local coordinates put the attachment point at the origin: `x = x₁ − 1`,
//! `y = x₂ − a`. Everything is symmetric under `y ↦ −y`, so the profile is
//! described by two piecewise linear functions of `x`: `base` (the lower
//! wall of the upper corridor pair, nonzero only along the diagonal part)
//! and `w` (the vertical width of a single corridor).

use serde::{Deserialize, Serialize};

use super::primitives::{Point2, Polygon, Polyline, Rect};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ex32,
    Thm43FatLong,
    Thm43ThinShort,
    Ex45,
    Ex46,
    Corridor,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Ex32 => "ex32",
            Family::Thm43FatLong => "ex44",
            Family::Thm43ThinShort => "thm43",
            Family::Ex45 => "ex45",
            Family::Ex46 => "ex46",
            Family::Corridor => "corridor",
        }
    }
}

/// Length and vertical corridor width of one part of a decoration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Part {
    pub length: f64,
    pub width: f64,
}

impl Part {
    pub const fn new(length: f64, width: f64) -> Self {
        Part { length, width }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecorationSpec {
    pub family: Family,
    pub j: u32,
    pub a: f64,
    /// `(R_j, r_j)`; the diagonal part has horizontal extent `2R_j`.
    pub diagonal: Part,
    /// Horizontal parts on each side, innermost first.
    pub layers: Vec<Part>,
}

impl DecorationSpec {
    pub fn big_r(&self) -> f64 {
        self.diagonal.length
    }

    pub fn r(&self) -> f64 {
        self.diagonal.width
    }

    pub fn prime(&self) -> Option<Part> {
        (self.family != Family::Ex32).then(|| self.layers.first().copied()).flatten()
    }

    pub fn dprime(&self) -> Option<Part> {
        self.layers.get(1).copied()
    }

    pub fn outermost(&self) -> Part {
        *self.layers.last().unwrap_or(&self.diagonal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionKind {
    Layer(usize),
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub kind: SectionKind,
    pub x0: f64,
    pub x1: f64,
    pub width: f64,
}

/// Height above or below the symmetry line, `sign·(base + k·w)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub k: f64,
    pub sign: f64,
}

impl Level {
    pub const TOP: Level = Level { k: 2.0, sign: 1.0 };
    pub const BOTTOM: Level = Level { k: 2.0, sign: -1.0 };
    pub const UPPER_BASE: Level = Level { k: 0.0, sign: 1.0 };
    pub const LOWER_BASE: Level = Level { k: 0.0, sign: -1.0 };
    pub const UPPER_MID: Level = Level { k: 1.0, sign: 1.0 };
    pub const LOWER_MID: Level = Level { k: 1.0, sign: -1.0 };
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecorationLandmarks {
    pub spec: DecorationSpec,
    /// Corridors 1 to 4 in order of increasing height.
    pub midlines: Vec<Polyline>,
    /// Endpoints of `U`, then of the two pieces of `L`.
    pub slit_endpoints: Vec<[Point2; 2]>,
    /// Global x-extents of the pinch regions.
    pub pinches: Vec<[f64; 2]>,
}

#[derive(Clone, Debug)]
pub struct Decoration {
    pub spec: DecorationSpec,
    sections: Vec<Section>,
    w_knots: Vec<(f64, f64)>,
    xs: Vec<f64>,
    junction: f64,
    total: f64,
    pinches: Vec<(f64, f64)>,
}

impl Decoration {
    pub fn new(spec: DecorationSpec) -> Result<Self> {
        let bad = |m: String| Err(Error::SpecInvalid(format!("decoration {}: {m}", spec.j)));
        let parts = std::iter::once(&spec.diagonal).chain(&spec.layers);
        for p in parts {
            if !(p.length.is_finite() && p.width.is_finite() && p.length > 0.0 && p.width > 0.0) {
                return bad(format!("non-positive part {p:?}"));
            }
            if p.width < 1e-300 {
                return bad("corridor width underflows double precision".into());
            }
            if p.length / p.width < 4.0 {
                return bad(format!("length/width ratio {} below 4", p.length / p.width));
            }
        }
        if spec.layers.is_empty() {
            return bad("at least one horizontal layer is required".into());
        }
        if !(spec.a.is_finite()) {
            return bad("non-finite attachment height".into());
        }

        let m = spec.layers.len();
        let mut sections = Vec::with_capacity(2 * m + 1);
        let mut x = 0.0;
        for i in (0..m).rev() {
            let p = spec.layers[i];
            sections.push(Section { kind: SectionKind::Layer(i), x0: x, x1: x + p.length, width: p.width });
            x += p.length;
        }
        let junction = x;
        let r_big = spec.diagonal.length;
        sections.push(Section { kind: SectionKind::Diagonal, x0: x, x1: x + 2.0 * r_big, width: spec.diagonal.width });
        x += 2.0 * r_big;
        for i in 0..m {
            let p = spec.layers[i];
            sections.push(Section { kind: SectionKind::Layer(i), x0: x, x1: x + p.length, width: p.width });
            x += p.length;
        }
        let total = x;
        let r_m = spec.outermost().width;

        let mut w_knots = vec![(0.0, r_m)];
        let mut pinches = Vec::new();
        let mut used = vec![0.0; sections.len()];
        used[0] += 3.0 * r_m;
        *used.last_mut().unwrap() += 3.0 * r_m;
        for k in 0..sections.len() - 1 {
            let (l, r) = (sections[k], sections[k + 1]);
            let xj = l.x1;
            if l.width > r.width {
                let e = l.width;
                w_knots.push((xj - e, l.width));
                w_knots.push((xj, r.width));
                pinches.push((xj - e, xj));
                used[k] += e;
            } else if l.width < r.width {
                let e = r.width;
                w_knots.push((xj, l.width));
                w_knots.push((xj + e, r.width));
                pinches.push((xj, xj + e));
                used[k + 1] += e;
            }
        }
        w_knots.push((total, r_m));
        for (s, u) in sections.iter().zip(&used) {
            if *u >= s.x1 - s.x0 {
                return bad(format!("pinch regions do not fit in section {:?}", s.kind));
            }
        }
        let apex = junction + r_big;
        if pinches.iter().any(|&(p0, p1)| p0 < apex && p1 > apex) {
            return bad("pinch region reaches the apex of the diagonal part".into());
        }
        if w_knots.windows(2).any(|w| w[1].0 < w[0].0) {
            return bad("degenerate pinch regions".into());
        }

        let mut xs: Vec<f64> = w_knots.iter().map(|k| k.0).collect();
        xs.extend([junction, junction + r_big, junction + 2.0 * r_big]);
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("breakpoints collapse at double precision".into());
        }
        // profile points must remain distinct once shifted to global coordinates
        let w_min = sections.iter().map(|s| s.width).fold(f64::INFINITY, f64::min);
        if xs.windows(2).any(|w| 1.0 + w[0] == 1.0 + w[1]) || 1.0 + 0.25 * w_min == 1.0 {
            return bad("breakpoints collapse at double precision".into());
        }
        Ok(Decoration { spec, sections, w_knots, xs, junction, total, pinches })
    }

    pub fn j(&self) -> u32 {
        self.spec.j
    }

    pub fn a(&self) -> f64 {
        self.spec.a
    }

    /// `J`: where the diagonal part begins (local x).
    pub fn junction(&self) -> f64 {
        self.junction
    }

    /// `T`: total horizontal extent.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.xs
    }

    pub fn r_outer(&self) -> f64 {
        self.spec.outermost().width
    }

    pub fn pinches_local(&self) -> &[(f64, f64)] {
        &self.pinches
    }

    pub fn base_at(&self, x: f64) -> f64 {
        let j = self.junction;
        let r = self.spec.diagonal.length;
        if x <= j || x >= j + 2.0 * r {
            0.0
        } else if x <= j + r {
            x - j
        } else {
            j + 2.0 * r - x
        }
    }

    pub fn w_at(&self, x: f64) -> f64 {
        let k = &self.w_knots;
        if x <= k[0].0 {
            return k[0].1;
        }
        let i = k.partition_point(|p| p.0 <= x);
        if i >= k.len() {
            return k[k.len() - 1].1;
        }
        let (x0, w0) = k[i - 1];
        let (x1, w1) = k[i];
        if x1 == x0 {
            w1
        } else {
            w0 + (w1 - w0) * (x - x0) / (x1 - x0)
        }
    }

    pub fn level_at(&self, lv: Level, x: f64) -> f64 {
        lv.sign * (self.base_at(x) + lv.k * self.w_at(x))
    }

    pub fn top_at(&self, x: f64) -> f64 {
        self.level_at(Level::TOP, x)
    }

    pub fn mid_at(&self, x: f64) -> f64 {
        self.level_at(Level::UPPER_MID, x)
    }

    /// Largest `|y|` reached by the decoration.
    pub fn half_height(&self) -> f64 {
        self.xs.iter().map(|&x| self.top_at(x)).fold(0.0, f64::max)
    }

    pub fn global(&self, x: f64, y: f64) -> Point2 {
        Point2::new(1.0 + x, self.spec.a + y)
    }

    pub fn local(&self, p: Point2) -> (f64, f64) {
        (p.x - 1.0, p.y - self.spec.a)
    }

    pub fn bbox(&self) -> Rect {
        let h = self.half_height();
        Rect::new(1.0, self.spec.a - h, 1.0 + self.total, self.spec.a + h)
    }

    fn xs_between(&self, x0: f64, x1: f64) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(x0)
            .chain(self.xs.iter().copied().filter(move |&x| x > x0 && x < x1))
            .chain(std::iter::once(x1))
    }

    /// Curve `y = level(x)` over `[x0, x1]` in global coordinates.
    pub fn curve(&self, lv: Level, x0: f64, x1: f64) -> Vec<Point2> {
        self.xs_between(x0, x1).map(|x| self.global(x, self.level_at(lv, x))).collect()
    }

    /// Region between two levels over `[x0, x1]`.
    pub fn band(&self, x0: f64, x1: f64, lo: Level, hi: Level) -> Result<Polygon> {
        let mut v = self.curve(lo, x0, x1);
        let mut up = self.curve(hi, x0, x1);
        up.reverse();
        v.extend(up);
        v.dedup();
        Polygon::new(v)
    }

    /// Lower outline from the attachment point to the far wall, then the upper outline back.
    pub fn outline(&self) -> Vec<Point2> {
        let mut v = self.curve(Level::BOTTOM, 0.0, self.total);
        let mut up = self.curve(Level::TOP, 0.0, self.total);
        up.reverse();
        v.extend(up);
        v
    }

    pub fn hole(&self) -> Polygon {
        let j = self.junction;
        let r = self.spec.diagonal.length;
        Polygon::new(vec![self.global(j, 0.0), self.global(j + r, -r), self.global(j + 2.0 * r, 0.0), self.global(j + r, r)])
            .expect("diamond hole is a valid polygon")
    }

    pub fn slit_u(&self) -> Polyline {
        let r_m = self.r_outer();
        let x1 = self.total - r_m;
        let mut v = self.curve(Level::LOWER_MID, r_m, x1);
        v.reverse();
        v.extend(self.curve(Level::UPPER_MID, r_m, x1));
        v.dedup();
        Polyline::new(v).expect("U slit has distinct vertices")
    }

    pub fn slit_l(&self) -> [Polyline; 2] {
        let r_m = self.r_outer();
        let j = self.junction;
        let r = self.spec.diagonal.length;
        [
            Polyline::new(vec![self.global(2.0 * r_m, 0.0), self.global(j, 0.0)]).expect("left piece of L"),
            Polyline::new(vec![self.global(j + 2.0 * r, 0.0), self.global(self.total, 0.0)]).expect("right piece of L"),
        ]
    }

    /// Corridor midline, `corridor` in 1..=4 by increasing height.
    pub fn midline(&self, corridor: u8) -> Result<Polyline> {
        let r_m = self.r_outer();
        let end = self.total - 0.5 * r_m;
        let (lv, x0) = match corridor {
            4 => (Level { k: 1.5, sign: 1.0 }, 0.0),
            3 => (Level { k: 0.5, sign: 1.0 }, 1.5 * r_m),
            2 => (Level { k: 0.5, sign: -1.0 }, 1.5 * r_m),
            1 => (Level { k: 1.5, sign: -1.0 }, 0.0),
            _ => return Err(Error::NoSuchCorridor { j: self.spec.j, corridor }),
        };
        Polyline::new(self.curve(lv, x0, end))
    }

    /// Point on a corridor midline at local abscissa `x`.
    pub fn midline_point(&self, corridor: u8, x: f64) -> Result<Point2> {
        let (k, sign) = match corridor {
            4 => (1.5, 1.0),
            3 => (0.5, 1.0),
            2 => (0.5, -1.0),
            1 => (1.5, -1.0),
            _ => return Err(Error::NoSuchCorridor { j: self.spec.j, corridor }),
        };
        Ok(self.global(x, self.level_at(Level { k, sign }, x)))
    }

    /// Which corridor a decoration point belongs to; `None` outside `0 < x < T`.
    pub fn corridor_of(&self, p: Point2) -> Option<u8> {
        let (x, y) = self.local(p);
        if !(x > 0.0 && x < self.total) || y.abs() >= self.top_at(x) {
            return None;
        }
        let r_m = self.r_outer();
        let mid = self.mid_at(x);
        Some(if x < r_m {
            if y >= 0.0 {
                4
            } else {
                1
            }
        } else if y >= 0.0 {
            if y >= mid {
                4
            } else {
                3
            }
        } else if y <= -mid {
            1
        } else {
            2
        })
    }

    /// Position along the closed corridor cycle `4 → 3 → 2 → 1`, of length `4T`.
    pub fn cycle_pos(&self, p: Point2) -> Option<f64> {
        let c = self.corridor_of(p)?;
        let (x, _) = self.local(p);
        Some(cycle_coord(c, x, self.total))
    }

    pub fn landmarks(&self) -> DecorationLandmarks {
        let [l0, l1] = self.slit_l();
        let u = self.slit_u();
        DecorationLandmarks {
            spec: self.spec.clone(),
            midlines: (1..=4).map(|c| self.midline(c).expect("corridor index in range")).collect(),
            slit_endpoints: vec![[u.start(), u.end()], [l0.start(), l0.end()], [l1.start(), l1.end()]],
            pinches: self.pinches.iter().map(|&(a, b)| [1.0 + a, 1.0 + b]).collect(),
        }
    }
}

pub(crate) fn cycle_coord(corridor: u8, x: f64, total: f64) -> f64 {
    match corridor {
        4 => x,
        3 => 2.0 * total - x,
        2 => 2.0 * total + x,
        _ => 4.0 * total - x,
    }
}
