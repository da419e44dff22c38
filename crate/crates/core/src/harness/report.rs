use std::path::Path;

use serde::{Deserialize, Serialize};

use super::RunConfig;
use crate::properties::Verdict;
use crate::witness::Witness;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: String,
    pub ring: String,
    pub property: String,
    pub degree: Option<u32>,
    pub expected: Verdict,
    /// A verdict, or `error: ...` when the case could not run.
    pub observed: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub work: u64,
    pub ms: u64,
    pub anchor: String,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.observed == self.expected.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub config: RunConfig,
    pub cases: Vec<CaseResult>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(config: RunConfig, cases: Vec<CaseResult>) -> RunReport {
        RunReport {
            version: super::VERSION.to_string(),
            config,
            pass: cases.iter().all(CaseResult::passed),
            cases,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The report with every timing zeroed, for comparing runs.
    pub fn without_timings(&self) -> RunReport {
        let mut r = self.clone();
        for c in &mut r.cases {
            c.ms = 0;
        }
        r
    }
}

/// Writes the report as pretty JSON with a trailing newline. Keys keep their
/// declaration order.
pub fn emit_report(r: &RunReport, path: &Path) -> Result<(), String> {
    std::fs::write(path, r.to_json()).map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_run_is_valid_json() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.json");
        let r = RunReport::new(RunConfig::default(), Vec::new());
        emit_report(&r, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.ends_with("}\n"));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["cases"], serde_json::json!([]));
        assert_eq!(v["pass"], serde_json::json!(true));
        let at = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
        assert!(
            at("version") < at("config") && at("config") < at("cases") && at("cases") < at("pass")
        );
        assert!(v["config"]["caps"]["order_cap"].is_u64());
        assert!(emit_report(&r, &dir.path().join("missing/x.json")).is_err());
    }
}
