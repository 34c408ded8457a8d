use serde::{Deserialize, Serialize};

use super::decoration::{Decoration, DecorationSpec, Family, Part};
use super::domain::PlanarDomain;
use super::primitives::{Point2, Polygon, Polyline};
use crate::error::{Error, Result};

/// `j^{j_power} · 2^{−(exponent·j + offset)}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleLaw {
    pub exponent: f64,
    #[serde(default)]
    pub offset: f64,
    #[serde(default)]
    pub j_power: i32,
}

impl ScaleLaw {
    pub const fn pow2(exponent: f64) -> Self {
        ScaleLaw { exponent, offset: 0.0, j_power: 0 }
    }

    pub fn log2_at(&self, j: u32) -> f64 {
        let jf = j as f64;
        self.j_power as f64 * jf.log2() - (self.exponent * jf + self.offset)
    }

    pub fn at(&self, j: u32) -> f64 {
        (j as f64).powi(self.j_power) * (-(self.exponent * j as f64 + self.offset)).exp2()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorridorLaw {
    pub length: ScaleLaw,
    pub width: ScaleLaw,
}

impl CorridorLaw {
    pub const fn pow2(p: f64, q: f64) -> Self {
        CorridorLaw { length: ScaleLaw::pow2(p), width: ScaleLaw::pow2(q) }
    }

    pub fn part(&self, j: u32) -> Part {
        Part::new(self.length.at(j), self.width.at(j))
    }

    /// `log₂ L_{j,α} = log₂ R − (1−α) log₂ r`.
    pub fn log2_l(&self, j: u32, alpha: f64) -> f64 {
        self.length.log2_at(j) - (1.0 - alpha) * self.width.log2_at(j)
    }
}

/// Diagonal part plus horizontal layers (innermost first).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorridorDesign {
    pub diagonal: CorridorLaw,
    pub layers: Vec<CorridorLaw>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllowableQuadruple {
    pub p: f64,
    pub q: f64,
    pub p_prime: f64,
    pub q_prime: f64,
}

impl AllowableQuadruple {
    pub fn new(p: f64, q: f64, p_prime: f64, q_prime: f64) -> Result<Self> {
        let quad = AllowableQuadruple { p, q, p_prime, q_prime };
        quad.check()?;
        Ok(quad)
    }

    pub fn check(&self) -> Result<()> {
        let AllowableQuadruple { p, q, p_prime, q_prime } = *self;
        let eps = 1e-12;
        let mut failed = Vec::new();
        if !(p > 0.0 && p <= q - 2.0 + eps) {
            failed.push("0 < p <= q-2");
        }
        if !(p_prime > 0.0 && p_prime <= q_prime - 2.0 + eps) {
            failed.push("0 < p' <= q'-2");
        }
        if p < 2.0 - eps {
            failed.push("p >= 2");
        }
        if q_prime < 2.0 - eps {
            failed.push("q' >= 2");
        }
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Error::SpecInvalid(format!("quadruple ({p}, {q}, {p_prime}, {q_prime}) not allowable: {}", failed.join(", "))))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RModifier {
    None,
    TimesJ,
    DivJ,
}

impl RModifier {
    pub fn j_power(self) -> i32 {
        match self {
            RModifier::None => 0,
            RModifier::TimesJ => 1,
            RModifier::DivJ => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// `a_j = 2^{-j}`.
    Dyadic,
    /// Stacked downward from the top edge with gaps of four outer corridor widths.
    Stacked,
    Explicit(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub design: usize,
    pub j: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoratedSquareSpec {
    pub family: Family,
    pub designs: Vec<CorridorDesign>,
    pub sequence: Vec<Slot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadruple: Option<AllowableQuadruple>,
    pub placement: Placement,
}

fn check_alpha(name: &str, a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(Error::SpecInvalid(format!("{name} = {a} must lie in (0,1)")))
    }
}

fn check_js(js: &[u32]) -> Result<()> {
    if js.is_empty() || js.contains(&0) {
        return Err(Error::SpecInvalid("decoration indices must be positive and nonempty".into()));
    }
    Ok(())
}

impl DecoratedSquareSpec {
    fn single(family: Family, design: CorridorDesign, js: &[u32], placement: Placement) -> Self {
        DecoratedSquareSpec {
            family,
            designs: vec![design],
            sequence: js.iter().map(|&j| Slot { design: 0, j }).collect(),
            alpha0: None,
            alpha1: None,
            quadruple: None,
            placement,
        }
    }

    /// Single-layer corridor family: `R_j = 4^{-j-1}`, `r_j = 8^{-j-1}`, `a_j = 2^{-j}`.
    pub fn ex32(js: &[u32]) -> Result<Self> {
        check_js(js)?;
        let law = CorridorLaw {
            length: ScaleLaw { exponent: 2.0, offset: 2.0, j_power: 0 },
            width: ScaleLaw { exponent: 3.0, offset: 3.0, j_power: 0 },
        };
        Ok(Self::single(Family::Ex32, CorridorDesign { diagonal: law, layers: vec![law] }, js, Placement::Dyadic))
    }

    /// Thin, short horizontal parts: `p' = p+1−α₀`, `q' = q+1`.
    pub fn thm43(alpha0: f64, p: f64, q: f64, js: &[u32]) -> Result<Self> {
        Self::ex45(alpha0, p, q, js, RModifier::None)
    }

    /// Fat, long horizontal parts: `p' = p−1+α₀`, `q' = q−1`.
    pub fn ex44(alpha0: f64, p: f64, q: f64, js: &[u32]) -> Result<Self> {
        check_alpha("alpha0", alpha0)?;
        check_js(js)?;
        let quad = AllowableQuadruple::new(p, q, p - 1.0 + alpha0, q - 1.0)?;
        let design = CorridorDesign {
            diagonal: CorridorLaw::pow2(p, q),
            layers: vec![CorridorLaw::pow2(quad.p_prime, quad.q_prime)],
        };
        let mut s = Self::single(Family::Thm43FatLong, design, js, Placement::Stacked);
        s.alpha0 = Some(alpha0);
        s.quadruple = Some(quad);
        Ok(s)
    }

    /// The thin-short construction with the diagonal width multiplied by `j^{±1}`.
    pub fn ex45(alpha0: f64, p: f64, q: f64, js: &[u32], modifier: RModifier) -> Result<Self> {
        check_alpha("alpha0", alpha0)?;
        check_js(js)?;
        let quad = AllowableQuadruple::new(p, q, p + 1.0 - alpha0, q + 1.0)?;
        let mut diagonal = CorridorLaw::pow2(p, q);
        diagonal.width.j_power = modifier.j_power();
        let design = CorridorDesign { diagonal, layers: vec![CorridorLaw::pow2(quad.p_prime, quad.q_prime)] };
        let family = if modifier == RModifier::None { Family::Thm43ThinShort } else { Family::Ex45 };
        let mut s = Self::single(family, design, js, Placement::Stacked);
        s.alpha0 = Some(alpha0);
        s.quadruple = Some(quad);
        Ok(s)
    }

    /// Thin-short inner layer plus fat-long outer layer.
    pub fn ex46(alpha0: f64, alpha1: f64, p: f64, q: f64, js: &[u32]) -> Result<Self> {
        check_alpha("alpha0", alpha0)?;
        check_alpha("alpha1", alpha1)?;
        if alpha0 >= alpha1 {
            return Err(Error::SpecInvalid(format!("alpha0 = {alpha0} must be below alpha1 = {alpha1}")));
        }
        check_js(js)?;
        let inner = AllowableQuadruple::new(p, q, p + 1.0 - alpha0, q + 1.0)?;
        let outer = AllowableQuadruple::new(p, q, p - 1.0 + alpha1, q - 1.0)?;
        let design = CorridorDesign {
            diagonal: CorridorLaw::pow2(p, q),
            layers: vec![CorridorLaw::pow2(inner.p_prime, inner.q_prime), CorridorLaw::pow2(outer.p_prime, outer.q_prime)],
        };
        let mut s = Self::single(Family::Ex46, design, js, Placement::Stacked);
        s.alpha0 = Some(alpha0);
        s.alpha1 = Some(alpha1);
        s.quadruple = Some(inner);
        Ok(s)
    }

    pub fn corridor(designs: Vec<CorridorDesign>, sequence: Vec<Slot>) -> Result<Self> {
        if designs.is_empty() || sequence.is_empty() {
            return Err(Error::SpecInvalid("corridor spec needs designs and a sequence".into()));
        }
        if let Some(s) = sequence.iter().find(|s| s.design >= designs.len() || s.j == 0) {
            return Err(Error::SpecInvalid(format!("bad slot {s:?}")));
        }
        Ok(DecoratedSquareSpec {
            family: Family::Corridor,
            designs,
            sequence,
            alpha0: None,
            alpha1: None,
            quadruple: None,
            placement: Placement::Stacked,
        })
    }

    pub fn js(&self) -> Vec<u32> {
        self.sequence.iter().map(|s| s.j).collect()
    }

    /// Decoration parameters before placement (with `a = 0`).
    fn unplaced(&self) -> Result<Vec<DecorationSpec>> {
        self.sequence
            .iter()
            .map(|s| {
                let d = self.designs.get(s.design).ok_or_else(|| Error::SpecInvalid(format!("slot refers to missing design {}", s.design)))?;
                Ok(DecorationSpec {
                    family: self.family,
                    j: s.j,
                    a: 0.0,
                    diagonal: d.diagonal.part(s.j),
                    layers: d.layers.iter().map(|l| l.part(s.j)).collect(),
                })
            })
            .collect()
    }

    pub fn decoration_specs(&self) -> Result<Vec<DecorationSpec>> {
        let mut specs = self.unplaced()?;
        let mut seen = std::collections::BTreeSet::new();
        for s in &specs {
            if !seen.insert(s.j) {
                return Err(Error::SpecInvalid(format!("decoration index {} used twice", s.j)));
            }
        }
        let heights = specs
            .iter()
            .map(|s| Decoration::new(s.clone()).map(|d| d.half_height()))
            .collect::<Result<Vec<_>>>()?;
        match &self.placement {
            Placement::Dyadic => {
                for s in &mut specs {
                    s.a = (-(s.j as f64)).exp2();
                }
            }
            Placement::Explicit(a) => {
                if a.len() != specs.len() {
                    return Err(Error::SpecInvalid(format!("{} attachment heights for {} decorations", a.len(), specs.len())));
                }
                for (s, &a) in specs.iter_mut().zip(a) {
                    s.a = a;
                }
            }
            Placement::Stacked => {
                let mut top = 1.0;
                for (s, &h) in specs.iter_mut().zip(&heights) {
                    let gap = 4.0 * s.outermost().width;
                    s.a = top - gap - h;
                    top = s.a - h;
                }
            }
        }
        Ok(specs)
    }

    pub fn build(&self) -> Result<PlanarDomain> {
        if let Some(q) = &self.quadruple {
            q.check()?;
        }
        build_decorated_square(self.decoration_specs()?)
    }
}

/// Unit square with the given decorations glued to its right side.
pub fn build_decorated_square(specs: Vec<DecorationSpec>) -> Result<PlanarDomain> {
    let mut decs = specs.into_iter().map(Decoration::new).collect::<Result<Vec<_>>>()?;
    decs.sort_by(|a, b| a.a().total_cmp(&b.a()));
    let mut prev_top = 0.0;
    for d in &decs {
        let h = d.half_height();
        let w_min = d.sections().iter().map(|s| s.width).fold(f64::INFINITY, f64::min);
        if d.a() + 0.25 * w_min == d.a() {
            return Err(Error::SpecInvalid(format!("decoration {} is too thin to resolve at its height", d.j())));
        }
        if !(d.a() - h > prev_top) {
            return Err(Error::SpecInvalid(format!("decoration {} overlaps its neighbor or the bottom edge", d.j())));
        }
        prev_top = d.a() + h;
    }
    if !(prev_top < 1.0) {
        return Err(Error::SpecInvalid("a decoration reaches the top edge".into()));
    }
    let mut v = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)];
    for d in &decs {
        v.extend(d.outline());
    }
    v.push(Point2::new(1.0, 1.0));
    v.push(Point2::new(0.0, 1.0));
    let outer = Polygon::new(v)?;
    let holes = decs.iter().map(Decoration::hole).collect();
    let mut slits: Vec<Polyline> = Vec::new();
    for d in &decs {
        slits.push(d.slit_u());
        slits.extend(d.slit_l());
    }
    let mut by_j = decs;
    by_j.sort_by_key(|d| d.j());
    PlanarDomain::with_decorations(vec![outer], holes, slits, by_j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm43_quadruple_from_example() {
        let s = DecoratedSquareSpec::thm43(0.5, 3.0, 6.0, &[2, 3]).unwrap();
        let q = s.quadruple.unwrap();
        assert_eq!((q.p_prime, q.q_prime), (3.5, 7.0));
        assert!(q.p_prime <= q.q_prime - 2.0);
        s.build().unwrap();
    }

    #[test]
    fn quadruple_rejections() {
        assert!(AllowableQuadruple::new(1.5, 6.0, 3.0, 7.0).is_err());
        assert!(AllowableQuadruple::new(3.0, 4.5, 3.0, 7.0).is_err());
        assert!(AllowableQuadruple::new(3.0, 6.0, 3.0, 4.0).is_err());
        assert!(AllowableQuadruple::new(3.0, 6.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn ex32_laws_are_exact_powers() {
        let s = DecoratedSquareSpec::ex32(&[2, 3, 4]).unwrap();
        let specs = s.decoration_specs().unwrap();
        for d in &specs {
            let j = d.j as i32;
            assert_eq!(d.big_r(), 4f64.powi(-j - 1));
            assert_eq!(d.r(), 8f64.powi(-j - 1));
            assert_eq!(d.a, 2f64.powi(-j));
        }
    }

    #[test]
    fn overlapping_placement_rejected() {
        let mut s = DecoratedSquareSpec::ex32(&[2, 3]).unwrap();
        s.placement = Placement::Explicit(vec![0.5, 0.5]);
        assert!(matches!(s.build(), Err(Error::SpecInvalid(_))));
    }

    #[test]
    fn underflow_rejected() {
        let s = DecoratedSquareSpec::ex32(&[340]).unwrap();
        assert!(matches!(s.build(), Err(Error::SpecInvalid(_))));
    }
}
