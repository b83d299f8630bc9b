//! JSON and text reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use vertop_core::{CheckEntry, Status};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub config: BTreeMap<String, String>,
    pub entries: Vec<Entry>,
}

impl Report {
    /// Entries are sorted by name, then parameters. `millis` is kept only
    /// when `timings` is set, so reports compare byte for byte.
    pub fn new(
        suite: &str,
        config: impl IntoIterator<Item = (String, String)>,
        entries: Vec<CheckEntry>,
        timings: bool,
    ) -> Self {
        let mut entries = entries;
        entries.sort_by_key(|e| e.sort_key());
        Report {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            config: config.into_iter().collect(),
            entries: entries
                .into_iter()
                .map(|e| Entry {
                    name: e.name,
                    params: e.params.into_iter().collect(),
                    status: e.status.as_str().to_string(),
                    witness: e.witness,
                    millis: if timings { e.millis } else { 0 },
                })
                .collect(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.status == Status::Pass.as_str())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite {}", self.suite);
        let cfg: Vec<String> = self
            .config
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(out, "config {}", cfg.join(" "));
        let mut counts = BTreeMap::new();
        for e in &self.entries {
            *counts.entry(e.status.as_str()).or_insert(0usize) += 1;
            let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = write!(
                out,
                "{:<5} {} {}",
                e.status.to_uppercase(),
                e.name,
                params.join(" ")
            );
            if e.millis > 0 {
                let _ = write!(out, " ({} ms)", e.millis);
            }
            out.push('\n');
            if let Some(w) = &e.witness {
                let _ = writeln!(out, "      witness: {w}");
            }
        }
        let _ = writeln!(
            out,
            "{} pass, {} fail, {} error",
            counts.get("pass").unwrap_or(&0),
            counts.get("fail").unwrap_or(&0),
            counts.get("error").unwrap_or(&0)
        );
        out
    }
}
