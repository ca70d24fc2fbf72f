//! Reports: a deterministic body and a separate timing record.

use std::fmt::Write as _;

use entroflow_core::NormValue;
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "VIOLATION",
            Status::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Item {
    pub fn new(id: impl Into<String>, status: Status) -> Self {
        Item { id: id.into(), status, value: None, numeric: None, detail: None, witness: None }
    }

    pub fn ok(id: impl Into<String>) -> Self {
        Item::new(id, Status::Ok)
    }

    pub fn check(id: impl Into<String>, passed: bool) -> Self {
        Item::new(id, if passed { Status::Ok } else { Status::Violation })
    }

    pub fn failed(id: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Item::new(id, Status::Error).detail(err.to_string())
    }

    /// Formal value plus its 16-digit numeric rendering.
    pub fn norm(mut self, v: &NormValue) -> Self {
        self.value = Some(v.to_string());
        self.numeric = Some(v.numeric());
        self
    }

    pub fn value(mut self, v: impl Into<String>) -> Self {
        self.value = Some(v.into());
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub checked: usize,
    pub violations: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportBody {
    pub schema: u32,
    pub command: String,
    pub items: Vec<Item>,
    pub provenance: Vec<String>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub body: ReportBody,
    pub timing: Timing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Violations,
    Errors,
}

impl Report {
    pub fn new(command: impl Into<String>, items: Vec<Item>, mut provenance: Vec<String>) -> Self {
        provenance.sort();
        provenance.dedup();
        let summary = Summary {
            checked: items.len(),
            violations: items.iter().filter(|i| i.status == Status::Violation).count(),
            errors: items.iter().filter(|i| i.status == Status::Error).count(),
        };
        Report {
            body: ReportBody { schema: REPORT_SCHEMA, command: command.into(), items, provenance, summary },
            timing: Timing::default(),
        }
    }

    pub fn outcome(&self) -> Outcome {
        let s = &self.body.summary;
        if s.violations > 0 {
            Outcome::Violations
        } else if s.errors > 0 {
            Outcome::Errors
        } else {
            Outcome::Passed
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The body alone, one line per item; timing is rendered by the caller.
    pub fn body_text(&self) -> String {
        let b = &self.body;
        let mut out = String::new();
        writeln!(out, "command: {}", b.command).unwrap();
        for item in &b.items {
            write!(out, "{} {}", item.status.label(), item.id).unwrap();
            if let Some(v) = &item.value {
                write!(out, " = {v}").unwrap();
            }
            if let Some(n) = &item.numeric {
                write!(out, " ({n})").unwrap();
            }
            if let Some(d) = &item.detail {
                write!(out, " [{d}]").unwrap();
            }
            if let Some(w) = &item.witness {
                write!(out, " witness: {w}").unwrap();
            }
            out.push('\n');
        }
        for p in &b.provenance {
            writeln!(out, "provenance: {p}").unwrap();
        }
        let s = &b.summary;
        writeln!(out, "summary: {} checked, {} violations, {} errors", s.checked, s.violations, s.errors).unwrap();
        out
    }
}
