use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::report::CheckReport;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<String>,
    pub h_policy: String,
    pub tolerances: BTreeMap<String, f64>,
    pub parameter_hash: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub scenario: String,
    pub parameters: serde_json::Value,
    pub columns: Vec<String>,
    /// Missing measurements are NaN here and `null` in the file.
    #[serde(deserialize_with = "rows_with_nulls")]
    pub rows: Vec<Vec<f64>>,
    pub details: serde_json::Value,
    pub checks: CheckReport,
    pub provenance: Provenance,
}

fn rows_with_nulls<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<Vec<f64>>, D::Error> {
    let rows: Vec<Vec<Option<f64>>> = Vec::deserialize(d)?;
    Ok(rows.into_iter().map(|r| r.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect()).collect())
}

pub const SAMPLER: &str = "chacha8 (rand_chacha 0.3), stream = decoration index";
pub const H_POLICY: &str = "h = local corridor width / 8, graded by decoration section";

/// First 16 hex digits of the SHA-256 of the canonical parameter text.
pub fn parameter_hash(parameters: &serde_json::Value) -> String {
    let text = crate::json::to_string(parameters);
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

impl ExperimentReport {
    pub fn new(scenario: &str, parameters: serde_json::Value, seed: Option<u64>) -> Self {
        let mut tolerances = BTreeMap::new();
        tolerances.insert("quadrature_rel".to_string(), crate::metrics::DEFAULT_TOL);
        tolerances.insert("geometric_abs".to_string(), 1e-12);
        tolerances.insert("grid_slack_in_h".to_string(), 2.0);
        let provenance = Provenance {
            tool: "wslice".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            sampler: seed.map(|_| SAMPLER.to_string()),
            h_policy: H_POLICY.into(),
            tolerances,
            parameter_hash: parameter_hash(&parameters),
        };
        ExperimentReport {
            scenario: scenario.into(),
            parameters,
            columns: Vec::new(),
            rows: Vec::new(),
            details: serde_json::Value::Null,
            checks: CheckReport::new(),
            provenance,
        }
    }

    /// `{scenario}_{hash}` without extension.
    pub fn file_stem(&self) -> String {
        format!("{}_{}", self.scenario, self.provenance.parameter_hash)
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:.17e}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn passed(&self) -> bool {
        self.checks.overall
    }
}
