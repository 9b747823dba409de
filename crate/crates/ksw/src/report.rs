//! Machine-readable run reports and their text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Vacuous,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
            Status::Vacuous => "VACUOUS",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status,
            detail: detail.into(),
        }
    }

    pub fn pass_if(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check::new(name, Status::from_bool(ok), detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub vacuous: usize,
}

/// Exit code is 0 iff every check passed, was skipped or was vacuous; 2 only
/// for malformed input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: BTreeMap<String, String>,
    pub result: Value,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub exit_code: i32,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            seed: None,
            inputs: BTreeMap::new(),
            result: Value::Null,
            checks: Vec::new(),
            summary: Summary::default(),
            exit_code: 0,
        }
    }

    pub fn input(&mut self, name: impl Into<String>, hash: String) {
        self.inputs.insert(name.into(), hash);
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Recomputes the summary and exit code from the checks.
    pub fn finish(mut self) -> Self {
        let mut s = Summary {
            total: self.checks.len(),
            ..Summary::default()
        };
        for c in &self.checks {
            match c.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Skipped => s.skipped += 1,
                Status::Vacuous => s.vacuous += 1,
            }
        }
        self.exit_code = if s.failed > 0 { 1 } else { 0 };
        self.summary = s;
        self
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        for (name, hash) in &self.inputs {
            let _ = writeln!(out, "input {name}: sha256 {hash}");
        }
        if !self.result.is_null() {
            let _ = writeln!(out, "result:");
            render_value(&mut out, &self.result, 1);
        }
        for c in &self.checks {
            if c.detail.is_empty() {
                let _ = writeln!(out, "{:<8}{}", c.status.label(), c.name);
            } else {
                let _ = writeln!(out, "{:<8}{}: {}", c.status.label(), c.name, c.detail);
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} check{}: {} passed, {} failed, {} skipped, {} vacuous; exit {}",
            s.total,
            if s.total == 1 { "" } else { "s" },
            s.passed,
            s.failed,
            s.skipped,
            s.vacuous,
            self.exit_code
        );
        out
    }
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                if is_scalar(v) || is_flat_array(v) {
                    let _ = writeln!(out, "{pad}{k}: {}", inline(v));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    render_value(out, v, depth + 1);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_scalar(item) || is_flat_array(item) {
                    let _ = writeln!(out, "{pad}- {}", inline(item));
                } else {
                    let _ = writeln!(out, "{pad}-");
                    render_value(out, item, depth + 1);
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{}", inline(v));
        }
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_) | Value::Array(_))
}

fn is_flat_array(v: &Value) -> bool {
    matches!(v, Value::Array(items) if items.iter().all(|i| is_scalar(i) || is_flat_array(i)))
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        _ => v.to_string(),
    }
}
