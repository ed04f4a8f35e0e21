//! Text and JSON reports.
//!
//! Every report type serializes to JSON and parses back to an equal value.

use std::fmt::Write as _;

use fmr_core::engine::{explain, AnalysisResult};
use fmr_core::oracle::{Audit, TruthTable, TruthTableRow, Verdict};
use fmr_core::{FailureMode, Kind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    pub cause: String,
    pub values: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feedback {
    pub variable: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub component: String,
    pub effect: String,
    pub cause: String,
    pub weakened: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub grid: String,
    /// `holds`, `unrefuted`, `inconclusive` or `refuted`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut_set: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub target: String,
    pub policy: Policy,
    pub cause: String,
    pub cut_sets: Vec<Vec<String>>,
    pub weakened: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub feedback: Vec<Feedback>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<Step>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<Check>>,
}

impl AnalysisReport {
    pub fn new(r: &AnalysisResult, with_trace: bool) -> Self {
        let e = explain(r);
        AnalysisReport {
            target: r.target.to_string(),
            policy: Policy {
                cause: r.cause_policy.as_str().to_string(),
                values: r.value_policy.as_str().to_string(),
            },
            cause: r.cause.to_string(),
            cut_sets: e
                .cut_sets
                .iter()
                .map(|t| t.iter().map(ToString::to_string).collect())
                .collect(),
            weakened: r.weakened,
            note: e.note.map(str::to_string),
            feedback: r
                .feedback
                .iter()
                .map(|f| Feedback {
                    variable: f.variable.clone(),
                    from: f.from.clone(),
                    to: f.to.clone(),
                })
                .collect(),
            trace: with_trace.then(|| {
                r.trace
                    .iter()
                    .map(|s| Step {
                        component: s.component.clone(),
                        effect: s.effect.to_string(),
                        cause: s.local.to_string(),
                        weakened: s.weakened,
                    })
                    .collect()
            }),
            checks: None,
        }
    }

    /// Appends the oracle verdicts of `audit`, run on the grid named `grid`.
    pub fn add_checks(&mut self, grid: &str, audit: &Audit) {
        let checks = self.checks.get_or_insert_with(Vec::new);
        let check = |v: &Verdict, cut_set: Option<Vec<String>>| {
            let (verdict, counterexample) = match v {
                Verdict::Holds => ("holds", None),
                Verdict::Unrefuted => ("unrefuted", None),
                Verdict::Inconclusive => ("inconclusive", None),
                Verdict::Refuted(c) => ("refuted", Some(c.to_string())),
            };
            Check {
                grid: grid.to_string(),
                verdict: verdict.to_string(),
                counterexample,
                cut_set,
            }
        };
        match audit {
            Audit::CertainCauses(v) => {
                for (t, v) in v {
                    checks.push(check(v, Some(t.iter().map(ToString::to_string).collect())));
                }
            }
            Audit::MinimumConditions(v) => checks.push(check(v, None)),
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "target: {}", self.target);
        let _ = writeln!(
            s,
            "policy: {} causes, value-{}",
            self.policy.cause, self.policy.values
        );
        let _ = writeln!(s, "weakened: {}", if self.weakened { "yes" } else { "no" });
        if let Some(n) = &self.note {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "cut sets:");
        for t in &self.cut_sets {
            let _ = writeln!(s, "  {{{}}}", t.join(", "));
        }
        if !self.feedback.is_empty() {
            let _ = writeln!(s, "feedback edges cut:");
            for f in &self.feedback {
                let _ = writeln!(s, "  {} from {} into {}", f.variable, f.from, f.to);
            }
        }
        if let Some(trace) = &self.trace {
            let _ = writeln!(s, "trace:");
            for step in trace {
                let w = if step.weakened { " (weakened)" } else { "" };
                let _ = writeln!(
                    s,
                    "  {}: {} <- {}{w}",
                    step.component, step.effect, step.cause
                );
            }
        }
        if let Some(checks) = &self.checks {
            let _ = writeln!(s, "oracle checks:");
            for c in checks {
                let _ = write!(s, "  [{}] ", c.grid);
                if let Some(t) = &c.cut_set {
                    let _ = write!(s, "{{{}}} ", t.join(", "));
                }
                let _ = write!(s, "{}", c.verdict);
                if let Some(ce) = &c.counterexample {
                    let _ = write!(s, ": {ce}");
                }
                s.push('\n');
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub no: usize,
    /// `(reported, intended, mode)` per input.
    pub inputs: Vec<(bool, bool, String)>,
    pub output: (bool, bool, String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthTableReport {
    pub kind: String,
    pub rows: Vec<TableRow>,
}

impl TruthTableReport {
    pub fn new(t: &TruthTable) -> Self {
        TruthTableReport {
            kind: t.kind.name().to_string(),
            rows: t
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| TableRow {
                    no: i + 1,
                    inputs: r
                        .inputs
                        .iter()
                        .map(|(x, y, m)| (*x, *y, m.to_string()))
                        .collect(),
                    output: (r.output.0, r.output.1, r.output.2.to_string()),
                })
                .collect(),
        }
    }

    pub fn text(&self) -> String {
        let mode = |s: &str| {
            s.chars()
                .next()
                .and_then(FailureMode::from_letter)
                .unwrap_or(FailureMode::Match)
        };
        let t = TruthTable {
            kind: Kind::from_name(&self.kind).unwrap_or(Kind::And),
            rows: self
                .rows
                .iter()
                .map(|r| TruthTableRow {
                    inputs: r.inputs.iter().map(|(x, y, m)| (*x, *y, mode(m))).collect(),
                    output: (r.output.0, r.output.1, mode(&r.output.2)),
                })
                .collect(),
        };
        t.render()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputChange {
    pub output: String,
    pub mode_from: String,
    pub mode_to: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpactReport {
    pub variable: String,
    pub from: String,
    pub to: String,
    pub outputs: Vec<OutputChange>,
    pub impact: f64,
}

impl ImpactReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "change: {} {} -> {}", self.variable, self.from, self.to);
        for o in &self.outputs {
            let _ = writeln!(
                s,
                "  {}: {} -> {} (|cmp| = {})",
                o.output, o.mode_from, o.mode_to, o.score
            );
        }
        let _ = writeln!(s, "impact: {}", self.impact);
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub diagnostics: Vec<String>,
    pub feedback: Vec<Feedback>,
}

impl ValidationReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        if self.valid {
            s.push_str("model is valid\n");
        }
        for d in &self.diagnostics {
            let _ = writeln!(s, "error: {d}");
        }
        for f in &self.feedback {
            let _ = writeln!(s, "loop: {} from {} into {}", f.variable, f.from, f.to);
        }
        s
    }
}

/// Pretty JSON, terminated by a newline.
pub fn to_json<T: Serialize>(r: &T) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
    s.push('\n');
    s
}

pub fn from_json<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T, serde_json::Error> {
    serde_json::from_str(s)
}
