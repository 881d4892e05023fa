//! Case reports shared by the CLI and the corpus runner.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub case_id: String,
    pub command: String,
    pub verdict: Verdict,
    /// One-line human summary for the text table.
    pub summary: String,
    pub details: Value,
    /// Zero unless timings were requested; keeps reports reproducible.
    pub elapsed_ms: u64,
}

impl CaseReport {
    pub fn new(case_id: impl Into<String>, command: &str, verdict: Verdict, summary: impl Into<String>, details: Value) -> Self {
        CaseReport {
            case_id: case_id.into(),
            command: command.to_string(),
            verdict,
            summary: summary.into(),
            details,
            elapsed_ms: 0,
        }
    }

    pub fn error(case_id: impl Into<String>, command: &str, err: &crate::Error) -> Self {
        let msg = err.to_string();
        Self::new(case_id, command, Verdict::Error, msg.clone(), serde_json::json!({ "error": msg }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub max_size: usize,
    pub seed: u64,
    pub cases: Vec<CaseReport>,
    pub summary: Value,
}

impl SuiteReport {
    pub fn count(&self, v: Verdict) -> usize {
        self.cases.iter().filter(|c| c.verdict == v).count()
    }

    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.verdict == Verdict::Pass)
    }

    /// Pretty JSON with sorted object keys.
    pub fn to_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("report serializes"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.cases.iter().map(|c| c.case_id.len()).max().unwrap_or(4).max(4);
        out.push_str(&format!("suite {} (max-size {}, seed {})\n", self.suite, self.max_size, self.seed));
        for c in &self.cases {
            out.push_str(&format!("{:<width$}  {:<5}  {}\n", c.case_id, verdict_word(c.verdict), c.summary));
        }
        out.push_str(&format!(
            "total {}  pass {}  fail {}  error {}\n",
            self.cases.len(),
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Error)
        ));
        if let Value::Object(m) = &self.summary {
            for (k, v) in m {
                out.push_str(&format!("{k}: {}\n", compact(v)));
            }
        }
        out
    }
}

pub fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
        Verdict::Error => "ERROR",
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// serde_json's map is ordered by key, so re-serializing a `Value` sorts
/// every object.
pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}
