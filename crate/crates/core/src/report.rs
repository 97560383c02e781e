//! Query reports, as printed by the command-line tool.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::homotopy::{Homotopy, HomotopySearch};
use crate::maps::ImageMap;
use crate::search::{SearchBudget, SearchOutcome, SearchStats, Verdict};

pub const TOOL_NAME: &str = "digitop";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A witness in canonical index form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<Vec<usize>>>,
}

impl Witness {
    pub fn map(f: &ImageMap) -> Self {
        Witness {
            assignment: Some(f.assignment().to_vec()),
            frames: None,
        }
    }

    pub fn homotopy(h: &Homotopy) -> Self {
        Witness {
            assignment: Some(h.end().assignment().to_vec()),
            frames: Some(h.frames().iter().map(|f| f.assignment().to_vec()).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub query: String,
    /// `None` for queries without a yes/no answer (info, construct, render).
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub stats: SearchStats,
    pub budget: SearchBudget,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Report {
    pub fn new(query: impl Into<String>, budget: SearchBudget) -> Self {
        Report {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            query: query.into(),
            verdict: None,
            witness: None,
            stats: SearchStats::default(),
            budget,
            details: Value::Null,
        }
    }

    pub fn from_outcome(query: impl Into<String>, budget: SearchBudget, outcome: &SearchOutcome) -> Self {
        Report {
            verdict: Some(outcome.verdict),
            witness: outcome.witness.as_ref().map(Witness::map),
            stats: outcome.stats,
            ..Report::new(query, budget)
        }
    }

    pub fn from_homotopy_search(query: impl Into<String>, budget: SearchBudget, search: &HomotopySearch) -> Self {
        Report {
            verdict: Some(search.verdict),
            witness: search.homotopy.as_ref().map(Witness::homotopy),
            stats: search.stats,
            ..Report::new(query, budget)
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    pub fn is_unknown(&self) -> bool {
        self.verdict == Some(Verdict::Unknown)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("{} {} :: {}", self.tool, self.version, self.query)];
        match self.verdict {
            Some(v) => lines.push(format!("verdict: {}", verdict_word(v))),
            None => lines.push("verdict: n/a".to_string()),
        }
        if let Some(w) = &self.witness {
            if let Some(a) = &w.assignment {
                lines.push(format!("witness: {a:?}"));
            }
            if let Some(frames) = &w.frames {
                for (t, f) in frames.iter().enumerate() {
                    lines.push(format!("  frame {t}: {f:?}"));
                }
            }
        }
        lines.push(format!(
            "stats: {} nodes, {} states{}",
            self.stats.nodes,
            self.stats.states,
            if self.stats.budget_exhausted { " (budget exhausted)" } else { "" }
        ));
        lines.push(format!(
            "budget: {} nodes, {} states",
            self.budget.max_nodes, self.budget.max_states
        ));
        if let Some(text) = self.details.get("grid").and_then(Value::as_str) {
            lines.push(text.trim_end().to_string());
        } else if let Some(summary) = self.details.get("summary").and_then(Value::as_array) {
            lines.extend(summary.iter().filter_map(Value::as_str).map(str::to_string));
        } else if !self.details.is_null() {
            lines.push(format!(
                "details: {}",
                serde_json::to_string(&self.details).expect("details serialize")
            ));
        }
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::Unknown => "unknown",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::interval;
    use crate::homotopy::is_rigid;

    #[test]
    fn json_is_stable_and_round_trips() {
        let x = interval(0, 2).unwrap();
        let b = SearchBudget::default();
        let out = is_rigid(&x, b);
        let r = Report::from_outcome("check rigid", b, &out);
        let a = r.to_json();
        assert_eq!(a, Report::from_outcome("check rigid", b, &is_rigid(&x, b)).to_json());
        let back: Report = serde_json::from_str(&a).unwrap();
        assert_eq!(back, r);
        assert!(a.contains("\"verdict\": \"false\""));
        assert!(a.contains("\"max_nodes\": 10000000"));
    }

    #[test]
    fn text_form() {
        let r = Report::new("info", SearchBudget::default()).with_details(serde_json::json!({"points": 3}));
        let t = r.to_text();
        assert!(t.contains("verdict: n/a"));
        assert!(t.contains("\"points\":3"));
    }
}
