//! Browser bindings: draw a decoration, classify exponents, measure the obstruction pair.

use serde_json::json;
use wasm_bindgen::prelude::*;
use wslice_core::experiments::{classify, predicted_alpha_set, ObstructionProbe};
use wslice_core::geometry::{DecoratedSquareSpec, PlanarDomain, RModifier};
use wslice_core::svg::{decoration_view, render, Figure};

fn spec(family: &str, js: &[u32], alpha0: f64, alpha1: f64) -> wslice_core::Result<DecoratedSquareSpec> {
    let (p, q) = (3.0, 6.0);
    match family {
        "ex32" => DecoratedSquareSpec::ex32(js),
        "thm43" => DecoratedSquareSpec::thm43(alpha0, p, q, js),
        "ex44" => DecoratedSquareSpec::ex44(alpha0, p, q, js),
        "ex45" => DecoratedSquareSpec::ex45(alpha0, p, q, js, RModifier::TimesJ),
        "ex46" => DecoratedSquareSpec::ex46(alpha0, alpha1, p, q, js),
        other => Err(wslice_core::Error::SpecInvalid(format!("unknown family `{other}`"))),
    }
}

fn err(e: wslice_core::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn domain(family: &str, j: u32, alpha0: f64, alpha1: f64) -> Result<PlanarDomain, JsValue> {
    spec(family, &[j], alpha0, alpha1).and_then(|s| s.build()).map_err(err)
}

/// SVG of decoration `j` with its four corridor midlines.
#[wasm_bindgen]
pub fn decoration_svg(family: &str, j: u32, alpha0: f64, alpha1: f64) -> Result<String, JsValue> {
    let dom = domain(family, j, alpha0, alpha1)?;
    let d = dom.decoration(j).map_err(err)?;
    let paths = (1..=4).map(|c| d.midline(c)).collect::<wslice_core::Result<Vec<_>>>().map_err(err)?;
    let fig = Figure { paths, title: Some(format!("{family}, j = {j}")), ..Figure::default() };
    Ok(render(&dom, Some(decoration_view(&dom, j).map_err(err)?), &fig))
}

/// Predicted α-set and the class of each exponent in `alphas`, as JSON.
#[wasm_bindgen]
pub fn alpha_set(family: &str, alpha0: f64, alpha1: f64, alphas: Vec<f64>) -> Result<String, JsValue> {
    let s = spec(family, &[2], alpha0, alpha1).map_err(err)?;
    let classes: Vec<_> = alphas.iter().map(|&a| json!({ "alpha": a, "class": classify(&s, a) })).collect();
    Ok(json!({ "set": predicted_alpha_set(&s).to_string(), "classes": classes }).to_string())
}

/// Midline bound, grid estimate and `L + L'` at the obstruction pair of decoration `j`, as JSON.
#[wasm_bindgen]
pub fn obstruction(family: &str, j: u32, alpha0: f64, alpha: f64) -> Result<String, JsValue> {
    let dom = domain(family, j, alpha0, 0.75)?;
    let probe = ObstructionProbe::new(&dom, j, true).map_err(err)?;
    let row = probe.row(alpha).map_err(err)?;
    Ok(json!({
        "upper": row.upper,
        "grid": row.grid,
        "lower": row.lower,
        "l_sum": row.l_sum(),
        "sigma_right": row.sigma_right,
        "nodes": probe.grid().map_or(0, |g| g.len()),
    })
    .to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_and_sets() {
        assert!(decoration_svg("thm43", 2, 0.5, 0.75).unwrap().starts_with("<svg"));
        let v: serde_json::Value = serde_json::from_str(&alpha_set("ex46", 0.3, 0.7, vec![0.2, 0.5, 0.8]).unwrap()).unwrap();
        assert_eq!(v["set"], "[0, 0.3] ∪ [0.7, 1)");
        assert_eq!(v["classes"][1]["class"], "obstructed");
    }
}
