//! Verdicts, defects and computed values of one command, rendered as text or
//! as the equivalent JSON document.

use std::fmt::Write;

use loopform::{Defect, EvField, JetExpression, Matrix, OneForm};
use serde::{Deserialize, Serialize};

use crate::parse::{show, show_ratfun};

pub const REPORT_VERSION: u32 = 1;
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

/// Nonzero component of a quantity that should vanish; indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectEntry {
    pub index: Vec<usize>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Informational checks are reported but never fail the command.
    pub informational: bool,
    pub defects: Vec<DefectEntry>,
}

impl Check {
    pub fn new(name: impl Into<String>, defects: Vec<DefectEntry>) -> Check {
        Check { name: name.into(), passed: defects.is_empty(), informational: false, defects }
    }

    pub fn informational(mut self) -> Check {
        self.informational = true;
        self
    }
}

/// A computed quantity, listed component by component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Output {
    pub label: String,
    pub components: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub name: String,
    pub millis: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub report_version: u32,
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    pub checks: Vec<Check>,
    pub outputs: Vec<Output>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Vec<Timing>>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            report_version: REPORT_VERSION,
            command: command.into(),
            status: Status::Pass,
            exit_code: 0,
            checks: Vec::new(),
            outputs: Vec::new(),
            timing: None,
        }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn output(&mut self, label: impl Into<String>, components: Vec<String>) {
        self.outputs.push(Output { label: label.into(), components });
    }

    /// Sets the status from the non-informational checks.
    pub fn finish(mut self) -> Report {
        let failed = self.checks.iter().any(|c| !c.passed && !c.informational);
        self.status = if failed { Status::Fail } else { Status::Pass };
        self.exit_code = if failed { 1 } else { 0 };
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "loopform {}", self.command);
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let info = if c.informational { " (informational)" } else { "" };
            let _ = writeln!(s, "[{}] {}{}", tag, c.name, info);
            for d in &c.defects {
                let _ = writeln!(s, "    {}: {}", index_text(&d.index), d.value);
            }
        }
        for o in &self.outputs {
            let _ = writeln!(s, "{}:", o.label);
            for (i, v) in o.components.iter().enumerate() {
                let _ = writeln!(s, "    {}: {}", i + 1, v);
            }
        }
        if let Some(t) = &self.timing {
            for e in t {
                let _ = writeln!(s, "time {}: {:.1} ms", e.name, e.millis);
            }
        }
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
        };
        let _ = writeln!(s, "status: {} (exit {})", status, self.exit_code);
        s
    }
}

fn index_text(index: &[usize]) -> String {
    let parts: Vec<String> = index.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

pub fn from_defect(d: &Defect, names: &[String]) -> Vec<DefectEntry> {
    d.entries
        .iter()
        .map(|(idx, v)| DefectEntry { index: idx.iter().map(|i| i + 1).collect(), value: show_ratfun(v, names) })
        .collect()
}

fn from_components(comps: &[JetExpression], names: &[String]) -> Vec<DefectEntry> {
    comps
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| DefectEntry { index: vec![i + 1], value: show(c, names) })
        .collect()
}

/// Nonzero components of the reduced form.
pub fn from_form(f: &OneForm, names: &[String]) -> Vec<DefectEntry> {
    from_components(&f.components(), names)
}

pub fn from_field(f: &EvField, names: &[String]) -> Vec<DefectEntry> {
    from_components(f.components(), names)
}

pub fn from_matrix(m: &Matrix, names: &[String]) -> Vec<DefectEntry> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m[(i, j)].is_zero() {
                out.push(DefectEntry { index: vec![i + 1, j + 1], value: show_ratfun(&m[(i, j)], names) });
            }
        }
    }
    out
}

pub fn form_components(f: &OneForm, names: &[String]) -> Vec<String> {
    f.components().iter().map(|c| show(c, names)).collect()
}

pub fn field_components(f: &EvField, names: &[String]) -> Vec<String> {
    f.components().iter().map(|c| show(c, names)).collect()
}
