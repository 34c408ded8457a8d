use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Decided on sampled paths only.
    ApproxPass,
    ApproxFail,
    /// Measured and reported, not judged.
    Info,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn approx(ok: bool) -> Self {
        if ok {
            Verdict::ApproxPass
        } else {
            Verdict::ApproxFail
        }
    }

    pub fn passed(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::ApproxPass | Verdict::Info)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub condition: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    pub verdict: Verdict,
    pub mandatory: bool,
    pub measured: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
    pub overall: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport { entries: Vec::new(), overall: true, notes: Vec::new() }
    }

    pub fn push(&mut self, condition: &str, subject: Option<String>, verdict: Verdict, mandatory: bool, measured: &[(&str, f64)]) {
        self.entries.push(CheckEntry {
            condition: condition.to_string(),
            subject,
            verdict,
            mandatory,
            measured: measured.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        });
        self.recompute();
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
        self.notes.extend(other.notes);
        self.recompute();
    }

    fn recompute(&mut self) {
        self.overall = self.entries.iter().filter(|e| e.mandatory).all(|e| e.verdict.passed());
    }

    pub fn entries_for<'a>(&'a self, condition: &'a str) -> impl Iterator<Item = &'a CheckEntry> + 'a {
        self.entries.iter().filter(move |e| e.condition == condition)
    }

    /// True when every entry for `condition` passed (vacuously true when absent).
    pub fn condition_passed(&self, condition: &str) -> bool {
        self.entries_for(condition).all(|e| e.verdict.passed())
    }
}
