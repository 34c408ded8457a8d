use serde::{Deserialize, Serialize};
use serde_json::json;

use super::obstruction::obstruction_rows;
use super::report::ExperimentReport;
use crate::error::{Error, Result};
use crate::geometry::{DecoratedSquareSpec, Family, RModifier};
use crate::report::Verdict;

/// `log₂ L_{j,α}` for `R = 2^{−jp}` and `r = j^m·2^{−jq}`.
pub fn log2_exact_l(j: u32, alpha: f64, p: f64, q: f64, modifier: RModifier) -> f64 {
    let jf = j as f64;
    let log2_r = modifier.j_power() as f64 * jf.log2() - jf * q;
    -jf * p - (1.0 - alpha) * log2_r
}

pub fn exact_l(j: u32, alpha: f64, p: f64, q: f64, modifier: RModifier) -> f64 {
    log2_exact_l(j, alpha, p, q, modifier).exp2()
}

/// `(1/j)·log₂(L/L′)`, from the two logarithms.
pub fn log2_ratio_over_j(j: u32, alpha: f64, p: f64, q: f64, p_prime: f64, q_prime: f64) -> f64 {
    let a = log2_exact_l(j, alpha, p, q, RModifier::None);
    let b = log2_exact_l(j, alpha, p_prime, q_prime, RModifier::None);
    (a - b) / j as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub j: u32,
    pub alpha: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "L_prime")]
    pub l_prime: f64,
    pub log2_ratio_over_j: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_alpha_upper: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_alpha_grid: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_alpha: Option<f64>,
}

/// Primed exponents for a family relation.
pub fn primed(family: Family, alpha0: f64, p: f64, q: f64) -> Result<(f64, f64)> {
    match family {
        Family::Thm43ThinShort | Family::Ex45 => Ok((p + 1.0 - alpha0, q + 1.0)),
        Family::Thm43FatLong => Ok((p - 1.0 + alpha0, q - 1.0)),
        _ => Err(Error::SpecInvalid(format!("no primed relation for family {}", family.name()))),
    }
}

/// Exact scaling rows; the grid columns are filled by the obstruction runner.
pub fn scaling_rows(alpha0: f64, p: f64, q: f64, alphas: &[f64], js: &[u32], family: Family) -> Result<Vec<ScalingRow>> {
    // validates the quadruple
    match family {
        Family::Thm43FatLong => {
            DecoratedSquareSpec::ex44(alpha0, p, q, &[1])?;
        }
        _ => {
            DecoratedSquareSpec::thm43(alpha0, p, q, &[1])?;
        }
    }
    let (pp, qp) = primed(family, alpha0, p, q)?;
    let mut rows = Vec::new();
    for &j in js {
        for &alpha in alphas {
            if !(0.0..1.0).contains(&alpha) {
                return Err(Error::SpecInvalid(format!("alpha = {alpha} outside [0,1)")));
            }
            rows.push(ScalingRow {
                j,
                alpha,
                l: exact_l(j, alpha, p, q, RModifier::None),
                l_prime: exact_l(j, alpha, pp, qp, RModifier::None),
                log2_ratio_over_j: log2_ratio_over_j(j, alpha, p, q, pp, qp),
                d_alpha_upper: None,
                d_alpha_grid: None,
                sigma_alpha: None,
            });
        }
    }
    Ok(rows)
}

/// Exact rows, with grid columns at the obstruction pair for `j ≤ grid_j_max`.
pub fn scaling_table(alpha0: f64, p: f64, q: f64, alphas: &[f64], js: &[u32], family: Family, grid_j_max: Option<u32>) -> Result<ExperimentReport> {
    let mut rows = scaling_rows(alpha0, p, q, alphas, js, family)?;
    if let Some(jmax) = grid_j_max {
        for &j in js.iter().filter(|&&j| j <= jmax) {
            let spec = match family {
                Family::Thm43FatLong => DecoratedSquareSpec::ex44(alpha0, p, q, &[j])?,
                _ => DecoratedSquareSpec::thm43(alpha0, p, q, &[j])?,
            };
            let dom = spec.build()?;
            for o in obstruction_rows(&dom, j, alphas, true)? {
                if let Some(r) = rows.iter_mut().find(|r| r.j == j && r.alpha == o.alpha) {
                    r.d_alpha_upper = Some(o.upper);
                    r.d_alpha_grid = o.grid;
                    r.sigma_alpha = Some(o.sigma_right);
                }
            }
        }
    }
    let params = json!({"alpha0": alpha0, "p": p, "q": q, "alphas": alphas, "js": js, "family": family.name(), "grid_j_max": grid_j_max});
    let mut rep = ExperimentReport::new("scaling", params, None);
    rep.columns = ["j", "alpha", "L", "L_prime", "log2_ratio_over_j", "expected", "d_alpha_upper", "d_alpha_grid", "sigma_alpha"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let sign = if family == Family::Thm43FatLong { -1.0 } else { 1.0 };
    for r in &rows {
        let expect = sign * (r.alpha - alpha0);
        let err = (r.log2_ratio_over_j - expect).abs();
        rep.checks.push(
            "identity",
            Some(format!("j={} alpha={}", r.j, r.alpha)),
            Verdict::from_bool(err <= 1e-12),
            true,
            &[("measured", r.log2_ratio_over_j), ("expected", expect), ("error", err)],
        );
        let opt = |v: Option<f64>| v.unwrap_or(f64::NAN);
        rep.rows.push(vec![r.j as f64, r.alpha, r.l, r.l_prime, r.log2_ratio_over_j, expect, opt(r.d_alpha_upper), opt(r.d_alpha_grid), opt(r.sigma_alpha)]);
        if let Some(s) = r.sigma_alpha {
            let f = s.max(r.l_prime) / s.min(r.l_prime);
            rep.checks.push("sigma_vs_L_prime", Some(format!("j={} alpha={}", r.j, r.alpha)), Verdict::Info, false, &[("factor", f)]);
        }
    }
    rep.details = serde_json::to_value(&rows).expect("rows serialize");
    Ok(rep)
}
