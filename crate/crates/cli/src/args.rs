use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wslice_core::geometry::{Point2, RModifier, Rect};

#[derive(Parser, Debug)]
#[command(name = "wslice", version, about = "Weak slice conditions on decorated planar domains", args_override_self = true)]
pub struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "WSLICE_OUT")]
    pub out: Option<PathBuf>,
    /// Seed for sampled scenarios.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// TOML file of flag values; flags on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Comma separated subset of report,table,figure.
    #[arg(long, global = true, value_parser = parse_formats)]
    pub format: Option<Formats>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Build a domain from a family or spec file and write it with a figure.
    GenDomain(GenDomainArgs),
    /// Grid estimate of the α-distance between two points.
    Dist(DistArgs),
    /// Check WS-1 to WS-3 for a dataset.
    CheckWslice(CheckArgs),
    /// Check the slice condition (and optionally WS-4, WS-5, WS-1+) along a path.
    CheckSlice(CheckSliceArgs),
    /// Run an experiment scenario.
    Experiment {
        #[command(subcommand)]
        which: Exp,
    },
}

#[derive(Subcommand, Debug)]
pub enum Exp {
    /// Corridor slices, the smallest passing C per j, and the apex witness
    Ex32(Ex32Args),
    /// Obstruction-pair measurements on the thin, short construction
    Thm43(Thm43Args),
    /// α-set probe of the fat, long construction
    Ex44(ProbeArgs),
    /// L/L′ trajectories under both width modifiers
    Ex45(Ex45Args),
    /// α-set probe of the two-design construction
    Ex46(ProbeArgs),
    /// Exponent of L/L′ against α − α₀
    Scaling(ScalingArgs),
    /// α-set probe of any family or spec file
    AlphaSet(AlphaSetArgs),
    /// Union or intersection of specs, with the probe algebra checked
    Combine(CombineArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyArg {
    Ex32,
    Thm43,
    Ex44,
    Ex45,
    Ex46,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModifierArg {
    None,
    TimesJ,
    DivJ,
}

impl From<ModifierArg> for RModifier {
    fn from(m: ModifierArg) -> Self {
        match m {
            ModifierArg::None => RModifier::None,
            ModifierArg::TimesJ => RModifier::TimesJ,
            ModifierArg::DivJ => RModifier::DivJ,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Union,
    Intersection,
}

// Construction parameters shared by the family builders.
#[derive(Args, Debug, Clone)]
pub struct LawArgs {
    /// Decoration indices, e.g. `2..5` or `2,3,7`.
    #[arg(long, value_parser = parse_js)]
    pub js: Option<Js>,
    #[arg(long)]
    pub jmin: Option<u32>,
    #[arg(long, default_value_t = 3)]
    pub jmax: u32,
    #[arg(long, default_value_t = 0.5)]
    pub alpha0: f64,
    #[arg(long, default_value_t = 0.75)]
    pub alpha1: f64,
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    #[arg(long, default_value_t = 6.0)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = ModifierArg::TimesJ)]
    pub modifier: ModifierArg,
}

#[derive(Args, Debug)]
pub struct SpecArgs {
    #[arg(long, value_enum, conflicts_with = "spec")]
    pub family: Option<FamilyArg>,
    /// Spec file (JSON) instead of a family.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub law: LawArgs,
}

#[derive(Args, Debug)]
pub struct GenDomainArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Plain rectangle `x0,y0,x1,y1` instead of a decorated square.
    #[arg(long, value_parser = parse_rect, conflicts_with_all = ["family", "spec"])]
    pub rect: Option<Rect>,
}

/// Grid selection: a decoration's graded grid, or a uniform grid over a window.
#[derive(Args, Debug)]
pub struct GridArgs {
    /// Use the graded grid of decoration `j`.
    #[arg(long)]
    pub j: Option<u32>,
    /// Uniform spacing.
    #[arg(long, conflicts_with = "j")]
    pub h: Option<f64>,
    /// Uniform grid window `x0,y0,x1,y1`; defaults to the domain's bounding box.
    #[arg(long, value_parser = parse_rect, conflicts_with = "j")]
    pub window: Option<Rect>,
}

#[derive(Args, Debug)]
pub struct DistArgs {
    #[arg(long)]
    pub domain: PathBuf,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub x: Point2,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub y: Point2,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub domain: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args, Debug)]
pub struct CheckSliceArgs {
    #[command(flatten)]
    pub check: CheckArgs,
    /// Path file: JSON array of points.
    #[arg(long)]
    pub path: PathBuf,
    /// Constant for the check; defaults to the dataset's.
    #[arg(long = "C")]
    pub c: Option<f64>,
    /// Also measure WS-4, WS-5 and WS-1+ with the path as the efficient path.
    #[arg(long)]
    pub plus: bool,
    #[arg(long, default_value_t = 1.0)]
    pub c1: f64,
}

#[derive(Args, Debug)]
pub struct Ex32Args {
    #[arg(long, value_parser = parse_js, default_value = "2,3")]
    pub js: Js,
    #[arg(long = "C", default_value_t = 10.0)]
    pub c: f64,
    /// Nontrivial pairs per decoration.
    #[arg(long, default_value_t = 50)]
    pub pairs: usize,
    #[arg(long, default_value_t = 50)]
    pub perturbed: usize,
    #[arg(long, default_value_t = 150)]
    pub via: usize,
}

#[derive(Args, Debug)]
pub struct Thm43Args {
    #[arg(long, default_value_t = 0.5)]
    pub alpha0: f64,
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    #[arg(long, default_value_t = 6.0)]
    pub q: f64,
    #[arg(long, value_parser = parse_js, default_value = "2,3")]
    pub js: Js,
    #[arg(long, value_parser = parse_floats, default_value = "0.25,0.5,0.75")]
    pub alphas: Floats,
    /// Skip the exhaustive toy search.
    #[arg(long)]
    pub no_toy: bool,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub law: LawArgs,
    #[arg(long, value_parser = parse_floats)]
    pub alphas: Option<Floats>,
    /// Grid measurements for decorations up to this index.
    #[arg(long)]
    pub grid_jmax: Option<u32>,
}

#[derive(Args, Debug)]
pub struct Ex45Args {
    #[arg(long, default_value_t = 0.5)]
    pub alpha0: f64,
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    #[arg(long, default_value_t = 6.0)]
    pub q: f64,
    #[arg(long, value_parser = parse_js, default_value = "2..12")]
    pub js: Js,
    #[arg(long, value_parser = parse_floats)]
    pub alphas: Option<Floats>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingFamily {
    Thm43,
    Ex44,
    Ex45,
}

#[derive(Args, Debug)]
pub struct ScalingArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha0: f64,
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    #[arg(long, default_value_t = 6.0)]
    pub q: f64,
    #[arg(long, value_parser = parse_floats, default_value = "0.25,0.5,0.75")]
    pub alphas: Floats,
    #[arg(long, value_parser = parse_js, default_value = "2..12")]
    pub js: Js,
    #[arg(long, value_enum, default_value_t = ScalingFamily::Thm43)]
    pub family: ScalingFamily,
    #[arg(long)]
    pub grid_jmax: Option<u32>,
}

#[derive(Args, Debug)]
pub struct AlphaSetArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_parser = parse_floats)]
    pub alphas: Option<Floats>,
    #[arg(long)]
    pub grid_jmax: Option<u32>,
}

#[derive(Args, Debug)]
pub struct CombineArgs {
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Spec files to combine (repeatable).
    #[arg(long)]
    pub spec: Vec<PathBuf>,
    /// Family donor `family:alpha0[:alpha1]` built with the shared law flags (repeatable).
    #[arg(long)]
    pub donor: Vec<String>,
    #[command(flatten)]
    pub law: LawArgs,
    #[arg(long, value_parser = parse_floats)]
    pub alphas: Option<Floats>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Js(pub Vec<u32>);

#[derive(Clone, Debug, PartialEq)]
pub struct Floats(pub Vec<f64>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Formats {
    pub report: bool,
    pub table: bool,
    pub figure: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Formats { report: true, table: true, figure: true }
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Comma separated integers and inclusive `a..b` ranges.
pub fn parse_js(s: &str) -> Result<Js, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| format!("bad range start in `{part}`"))?;
            let b: u32 = b.trim().parse().map_err(|_| format!("bad range end in `{part}`"))?;
            if a > b {
                return Err(format!("empty range `{part}`"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| format!("`{part}` is not an index"))?);
        }
    }
    if out.is_empty() {
        return Err("empty index list".into());
    }
    Ok(Js(out))
}

pub fn parse_floats(s: &str) -> Result<Floats, String> {
    let v = s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(parse_f64).collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("empty list".into());
    }
    Ok(Floats(v))
}

pub fn parse_point(s: &str) -> Result<Point2, String> {
    match s.split(',').collect::<Vec<_>>()[..] {
        [a, b] => Ok(Point2::new(parse_f64(a)?, parse_f64(b)?)),
        _ => Err(format!("`{s}` is not a point `x,y`")),
    }
}

pub fn parse_rect(s: &str) -> Result<Rect, String> {
    let v = parse_floats(s)?.0;
    match v[..] {
        [x0, y0, x1, y1] if x1 > x0 && y1 > y0 => Ok(Rect::new(x0, y0, x1, y1)),
        [_, _, _, _] => Err(format!("`{s}` has empty extent")),
        _ => Err(format!("`{s}` is not a rectangle `x0,y0,x1,y1`")),
    }
}

pub fn parse_formats(s: &str) -> Result<Formats, String> {
    let mut f = Formats { report: false, table: false, figure: false };
    for part in s.split(',').map(str::trim) {
        match part {
            "report" => f.report = true,
            "table" => f.table = true,
            "figure" => f.figure = true,
            _ => return Err(format!("unknown format `{part}`")),
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_lists() {
        assert_eq!(parse_js("2..5").unwrap().0, vec![2, 3, 4, 5]);
        assert_eq!(parse_js("2,4..5,9").unwrap().0, vec![2, 4, 5, 9]);
        assert!(parse_js("5..2").is_err());
        assert!(parse_js("x").is_err());
    }

    #[test]
    fn points_and_rects() {
        assert_eq!(parse_point("5,0.1").unwrap(), Point2::new(5.0, 0.1));
        assert!(parse_point("5").is_err());
        assert!(parse_rect("0,0,1,1").is_ok());
        assert!(parse_rect("0,0,0,1").is_err());
    }
}
