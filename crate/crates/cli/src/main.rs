mod args;
mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;
use wslice_core::experiments::{
    self, alpha_set_probe, run_combine, run_ex45, run_example32, run_thm43, scaling_table, CombineMode, Ex32Options, ExperimentReport, ObstructionOptions,
};
use wslice_core::geometry::{self, domain_from_json, domain_to_json, DecoratedSquareSpec, Family, PlanarDomain, Point2, Polyline, RModifier};
use wslice_core::metrics::grid::{build_grid, decoration_grid, GridGraph};
use wslice_core::metrics::paths::d_alpha;
use wslice_core::report::Verdict;
use wslice_core::slices::checks::{check_slice_condition, check_wsplus, evaluate_dataset};
use wslice_core::slices::corridor::{all_corridor_slices, locate};
use wslice_core::slices::region::{dataset_from_json, WsliceDataset};
use wslice_core::slices::witness::avoiding_path;
use wslice_core::svg::{decoration_view, render, Figure};
use wslice_core::{Error, Result};

use args::*;
use output::Writer;

/// Default number of grid cells across the longer side of a uniform window.
const UNIFORM_CELLS: f64 = 200.0;

enum Failure {
    Usage(String),
    Spec(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Spec(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn default_alphas() -> Vec<f64> {
    (0..20).map(|i| i as f64 * 0.05).collect()
}

fn law_js(law: &LawArgs, family: FamilyArg) -> Vec<u32> {
    match &law.js {
        Some(js) => js.0.clone(),
        None => {
            let lo = law.jmin.unwrap_or(if family == FamilyArg::Ex32 { 1 } else { 2 });
            (lo..=law.jmax).collect()
        }
    }
}

fn family_spec(family: FamilyArg, law: &LawArgs) -> Result<DecoratedSquareSpec> {
    let js = law_js(law, family);
    match family {
        FamilyArg::Ex32 => DecoratedSquareSpec::ex32(&js),
        FamilyArg::Thm43 => DecoratedSquareSpec::thm43(law.alpha0, law.p, law.q, &js),
        FamilyArg::Ex44 => DecoratedSquareSpec::ex44(law.alpha0, law.p, law.q, &js),
        FamilyArg::Ex45 => DecoratedSquareSpec::ex45(law.alpha0, law.p, law.q, &js, RModifier::from(law.modifier)),
        FamilyArg::Ex46 => DecoratedSquareSpec::ex46(law.alpha0, law.alpha1, law.p, law.q, &js),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_spec(path: &Path) -> Result<DecoratedSquareSpec, Failure> {
    let spec: DecoratedSquareSpec = serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    spec.decoration_specs()?;
    Ok(spec)
}

fn spec_from(a: &SpecArgs) -> Result<DecoratedSquareSpec, Failure> {
    match (&a.spec, a.family) {
        (Some(p), _) => read_spec(p),
        (None, Some(f)) => Ok(family_spec(f, &a.law)?),
        (None, None) => Err(usage("one of --family or --spec is required")),
    }
}

fn read_domain(path: &Path) -> Result<(PlanarDomain, String), Failure> {
    let text = read(path)?;
    let d = domain_from_json(&text)?;
    Ok((d, text))
}

fn text_hash(text: &str) -> String {
    experiments::parameter_hash(&serde_json::Value::String(text.to_string()))
}

/// Graded decoration grid when asked for or when both points lie in one decoration, else a uniform window.
fn pick_grid(domain: &PlanarDomain, g: &GridArgs, x: Point2, y: Point2) -> Result<(GridGraph, serde_json::Value)> {
    if let Some(j) = g.j {
        return Ok((decoration_grid(domain, j)?, json!({ "decoration": j })));
    }
    if g.h.is_none() && g.window.is_none() {
        if let Some(d) = domain.decorations().iter().find(|d| locate(domain, d, x).is_ok() && locate(domain, d, y).is_ok()) {
            return Ok((decoration_grid(domain, d.j())?, json!({ "decoration": d.j() })));
        }
    }
    let w = g.window.unwrap_or_else(|| domain.bbox());
    let h = g.h.unwrap_or(w.width().max(w.height()) / UNIFORM_CELLS);
    if !(h > 0.0) {
        return Err(Error::SpecInvalid(format!("h = {h} must be positive")));
    }
    Ok((build_grid(domain, w, h)?, json!({ "window": [w.min.x, w.min.y, w.max.x, w.max.y], "h": h })))
}

/// Provenance names the uniform spacing when the grid is not a decoration grid.
fn note_grid(rep: &mut ExperimentReport, gp: &serde_json::Value) {
    if let Some(h) = gp.get("h").and_then(|h| h.as_f64()) {
        rep.provenance.h_policy = format!("uniform h = {h} over the window");
    }
}

fn gen_domain(a: &GenDomainArgs, w: &Writer) -> Result<bool, Failure> {
    let (domain, params, view) = if let Some(r) = a.rect {
        let d = geometry::rectangle(r)?;
        (d, json!({ "rect": [r.min.x, r.min.y, r.max.x, r.max.y] }), None)
    } else {
        let spec = spec_from(&a.spec)?;
        let d = spec.build()?;
        let view = match d.decorations().first() {
            Some(first) => Some(decoration_view(&d, first.j())?),
            None => None,
        };
        (d, json!({ "spec": spec }), view)
    };
    let mut rep = ExperimentReport::new("domain", params, None);
    let stem = rep.file_stem();
    let text = domain_to_json(&domain);
    let b = domain.bbox();
    rep.checks.push("domain", None, Verdict::Info, false, &[("decorations", domain.decorations().len() as f64), ("slits", domain.slits().len() as f64)]);
    rep.details = json!({ "domain_file": format!("{stem}.domain.json"), "bbox": [b.min.x, b.min.y, b.max.x, b.max.y] });
    w.write(&format!("{stem}.domain.json"), &text)?;
    let fig = Figure { title: Some(stem.clone()), ..Figure::default() };
    w.finish(&rep, Some(render(&domain, view, &fig)))
}

fn dist(a: &DistArgs, w: &Writer) -> Result<bool, Failure> {
    let (domain, text) = read_domain(&a.domain)?;
    let (grid, gp) = pick_grid(&domain, &a.grid, a.x, a.y)?;
    let est = d_alpha(&grid, a.x, a.y, a.alpha)?;
    let params = json!({ "domain": text_hash(&text), "x": a.x, "y": a.y, "alpha": a.alpha, "grid": gp });
    let mut rep = ExperimentReport::new("dist", params, None);
    note_grid(&mut rep, &gp);
    rep.columns = ["alpha", "nodes", "value"].iter().map(|s| s.to_string()).collect();
    rep.rows.push(vec![a.alpha, grid.len() as f64, est.value]);
    rep.checks.push("estimate", None, Verdict::Info, false, &[("value", est.value), ("nodes", grid.len() as f64)]);
    println!("d_alpha = {}", est.value);
    let bb = est.polyline.vertices().iter().fold(geometry::Rect::new(a.x.x, a.x.y, a.x.x, a.x.y), |r, &p| r.union(&geometry::Rect::new(p.x, p.y, p.x, p.y)));
    let view = bb.expand(0.25 * bb.width().max(bb.height()).max(grid.h_max()));
    let fig = Figure { paths: vec![est.polyline.clone()], points: vec![a.x, a.y], title: Some(rep.file_stem()), ..Figure::default() };
    rep.details = json!({ "estimate": est });
    w.finish(&rep, Some(render(&domain, Some(view), &fig)))
}

fn load_check(a: &CheckArgs) -> Result<(PlanarDomain, WsliceDataset, GridGraph, serde_json::Value), Failure> {
    let (domain, dtext) = read_domain(&a.domain)?;
    let stext = read(&a.dataset)?;
    let ds = dataset_from_json(&stext)?;
    let (grid, gp) = pick_grid(&domain, &a.grid, ds.x, ds.y)?;
    let params = json!({ "domain": text_hash(&dtext), "dataset": text_hash(&stext), "grid": gp });
    Ok((domain, ds, grid, params))
}

fn dataset_figure(domain: &PlanarDomain, ds: &WsliceDataset, paths: Vec<Polyline>, title: String) -> String {
    let mut view = geometry::Rect::new(ds.x.x.min(ds.y.x), ds.x.y.min(ds.y.y), ds.x.x.max(ds.y.x), ds.x.y.max(ds.y.y));
    for s in &ds.slices {
        view = view.union(&s.shape.bbox());
    }
    let view = view.expand(0.1 * view.width().max(view.height()));
    let fig = Figure { slices: ds.slices.iter().map(|s| s.shape.clone()).collect(), paths, points: vec![ds.x, ds.y], title: Some(title) };
    render(domain, Some(view), &fig)
}

fn check_wslice(a: &CheckArgs, w: &Writer) -> Result<bool, Failure> {
    let (domain, ds, grid, params) = load_check(a)?;
    let est = d_alpha(&grid, ds.x, ds.y, ds.alpha)?;
    let gp = params["grid"].clone();
    let mut rep = ExperimentReport::new("check-wslice", params, None);
    note_grid(&mut rep, &gp);
    rep.checks = evaluate_dataset(&domain, &grid, &ds, est.value)?;
    rep.details = json!({ "d_alpha": est.value, "nodes": grid.len() });
    let fig = dataset_figure(&domain, &ds, vec![est.polyline], rep.file_stem());
    w.finish(&rep, Some(fig))
}

fn check_slice(a: &CheckSliceArgs, w: &Writer) -> Result<bool, Failure> {
    let (domain, ds, grid, mut params) = load_check(&a.check)?;
    let ptext = read(&a.path)?;
    let path: Polyline = serde_json::from_str(&ptext).map_err(|e| Error::Parse(format!("{}: {e}", a.path.display())))?;
    let c = a.c.unwrap_or(ds.c);
    params["path"] = json!(text_hash(&ptext));
    params["C"] = json!(c);
    params["plus"] = json!(a.plus);
    params["c1"] = json!(a.c1);
    let gp = params["grid"].clone();
    let mut rep = ExperimentReport::new("check-slice", params, None);
    note_grid(&mut rep, &gp);
    rep.checks = check_slice_condition(&domain, &grid, &ds, &path, c)?;
    if a.plus {
        rep.checks.extend(check_wsplus(&domain, &grid, &ds.with_c(c), &path, a.c1)?);
    }
    let fig = dataset_figure(&domain, &ds, vec![path], rep.file_stem());
    w.finish(&rep, Some(fig))
}

fn experiment(e: &Exp, seed: Option<u64>, w: &Writer) -> Result<bool, Failure> {
    match e {
        Exp::Ex32(a) => {
            let opts = Ex32Options { js: a.js.0.clone(), c: a.c, n_pairs: a.pairs, seed: seed.unwrap_or(0), perturbed_paths: a.perturbed, via_paths: a.via };
            let rep = run_example32(&opts)?;
            let domain = DecoratedSquareSpec::ex32(&opts.js)?.build()?;
            let j = opts.js[0];
            let d = domain.decoration(j)?;
            let fig = Figure {
                slices: all_corridor_slices(d)?.into_iter().map(|s| s.region.shape).collect(),
                paths: vec![avoiding_path(&domain, j)?],
                points: Vec::new(),
                title: Some(rep.file_stem()),
            };
            w.finish(&rep, Some(render(&domain, Some(decoration_view(&domain, j)?), &fig)))
        }
        Exp::Thm43(a) => {
            let opts = ObstructionOptions { alpha0: a.alpha0, p: a.p, q: a.q, js: a.js.0.clone(), alphas: a.alphas.0.clone(), toy: !a.no_toy };
            let rep = run_thm43(&opts)?;
            let domain = DecoratedSquareSpec::thm43(a.alpha0, a.p, a.q, &opts.js)?.build()?;
            let j = opts.js[0];
            let d = domain.decoration(j)?;
            let (y, z) = experiments::obstruction_pair(d);
            let fig = Figure {
                slices: experiments::obstruction::forced_regions(d)?,
                paths: vec![experiments::obstruction::midline_route(d)?],
                points: vec![y, z],
                title: Some(rep.file_stem()),
            };
            w.finish(&rep, Some(render(&domain, Some(decoration_view(&domain, j)?), &fig)))
        }
        Exp::Ex44(a) | Exp::Ex46(a) => {
            let fam = if matches!(e, Exp::Ex44(_)) { FamilyArg::Ex44 } else { FamilyArg::Ex46 };
            let spec = family_spec(fam, &a.law)?;
            let alphas = a.alphas.as_ref().map_or_else(default_alphas, |f| f.0.clone());
            let mut rep = alpha_set_probe(&spec, &alphas, &spec.js(), a.grid_jmax)?;
            rep.scenario = if fam == FamilyArg::Ex44 { "ex44" } else { "ex46" }.into();
            w.finish(&rep, None)
        }
        Exp::Ex45(a) => {
            let alphas = a.alphas.as_ref().map_or_else(default_alphas, |f| f.0.clone());
            w.finish(&run_ex45(a.alpha0, a.p, a.q, &a.js.0, &alphas)?, None)
        }
        Exp::Scaling(a) => {
            let family = match a.family {
                ScalingFamily::Thm43 => Family::Thm43ThinShort,
                ScalingFamily::Ex44 => Family::Thm43FatLong,
                ScalingFamily::Ex45 => Family::Ex45,
            };
            w.finish(&scaling_table(a.alpha0, a.p, a.q, &a.alphas.0, &a.js.0, family, a.grid_jmax)?, None)
        }
        Exp::AlphaSet(a) => {
            let spec = spec_from(&a.spec)?;
            let alphas = a.alphas.as_ref().map_or_else(default_alphas, |f| f.0.clone());
            w.finish(&alpha_set_probe(&spec, &alphas, &spec.js(), a.grid_jmax)?, None)
        }
        Exp::Combine(a) => {
            let mut specs = a.spec.iter().map(|p| read_spec(p)).collect::<Result<Vec<_>, _>>()?;
            for d in &a.donor {
                specs.push(donor_spec(d, &a.law)?);
            }
            if specs.len() < 2 {
                return Err(usage("combine needs at least two --spec or --donor values"));
            }
            let mode = match a.mode {
                ModeArg::Union => CombineMode::Union,
                ModeArg::Intersection => CombineMode::Intersection,
            };
            let alphas = a.alphas.as_ref().map_or_else(default_alphas, |f| f.0.clone());
            let (combined, rep) = run_combine(mode, &specs, &alphas)?;
            w.write(&format!("{}.spec.json", rep.file_stem()), &wslice_core::json::to_string(&combined))?;
            w.finish(&rep, None)
        }
    }
}

/// `family:alpha0[:alpha1]`.
fn donor_spec(s: &str, law: &LawArgs) -> Result<DecoratedSquareSpec, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("--donor `{s}`: expected family:alpha0[:alpha1]"));
    if parts.len() < 2 || parts.len() > 3 {
        return Err(bad());
    }
    let fam = <FamilyArg as clap::ValueEnum>::from_str(parts[0], true).map_err(|_| bad())?;
    let mut law = law.clone();
    law.alpha0 = parts[1].parse().map_err(|_| bad())?;
    if let Some(a1) = parts.get(2) {
        law.alpha1 = a1.parse().map_err(|_| bad())?;
    }
    Ok(family_spec(fam, &law)?)
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| usage(format!("--threads: {e}")))?;
    }
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let w = Writer::new(dir, cli.format.unwrap_or_default()).map_err(|e| usage(format!("--out: {e}")))?;
    match &cli.cmd {
        Cmd::GenDomain(a) => gen_domain(a, &w),
        Cmd::Dist(a) => dist(a, &w),
        Cmd::CheckWslice(a) => check_wslice(a, &w),
        Cmd::CheckSlice(a) => check_slice(a, &w),
        Cmd::Experiment { which } => experiment(which, cli.seed, &w),
    }
}

fn main() -> ExitCode {
    let argv = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("error: invalid usage"));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Spec(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
