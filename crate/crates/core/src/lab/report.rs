//! Report tree: serialized to JSON for machines and rendered as text.

use std::fmt::Write;

use serde::Serialize;

use crate::model::ModelData;
use crate::scalar::{float_tolerance, Mode, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Nothing to check; counts as passing.
    Skipped,
}

impl Status {
    pub fn passed(self) -> bool {
        self != Status::Fail
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

/// One asserted identity with its residual and tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The identity being asserted, as a formula.
    pub identity: String,
    pub passed: bool,
    pub residual: String,
    pub tolerance: String,
}

impl Check {
    /// Passes when `residual` is negligible in its mode.
    pub fn residual<S: Scalar>(name: &str, identity: &str, residual: &S) -> Self {
        Self {
            name: name.into(),
            identity: identity.into(),
            passed: residual.is_negligible(),
            residual: scalar_string(residual),
            tolerance: mode_tolerance(S::MODE),
        }
    }

    /// Passes when `residual <= tol`.
    pub fn within(name: &str, identity: &str, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            identity: identity.into(),
            passed: residual <= tol,
            residual: format_f64(residual),
            tolerance: format_f64(tol),
        }
    }

    pub fn holds(name: &str, identity: &str, passed: bool) -> Self {
        Self {
            name: name.into(),
            identity: identity.into(),
            passed,
            residual: if passed { "holds" } else { "violated" }.into(),
            tolerance: "exact".into(),
        }
    }
}

pub fn mode_tolerance(mode: Mode) -> String {
    match mode {
        Mode::Exact => "0 (exact)".into(),
        Mode::Float => format_f64(float_tolerance()),
    }
}

/// Exact values print as rationals, floats in scientific notation.
pub fn scalar_string<S: Scalar>(v: &S) -> String {
    match S::MODE {
        Mode::Exact => v.to_string(),
        Mode::Float => format_f64(v.to_f64()),
    }
}

/// Shortest round-trip representation, so reports are stable.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section {
    pub task: String,
    pub status: Status,
    pub checks: Vec<Check>,
    pub details: serde_json::Value,
    pub error: Option<String>,
}

impl Section {
    pub fn new(task: &str, checks: Vec<Check>, details: serde_json::Value) -> Self {
        let status = if checks.iter().all(|c| c.passed) { Status::Pass } else { Status::Fail };
        Self {
            task: task.into(),
            status,
            checks,
            details,
            error: None,
        }
    }

    pub fn failed(task: &str, error: impl ToString) -> Self {
        Self {
            task: task.into(),
            status: Status::Fail,
            checks: Vec::new(),
            details: serde_json::Value::Null,
            error: Some(error.to_string()),
        }
    }

    pub fn skipped(task: &str, reason: &str) -> Self {
        Self {
            task: task.into(),
            status: Status::Skipped,
            checks: Vec::new(),
            details: serde_json::json!({ "reason": reason }),
            error: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSummary {
    pub n: usize,
    pub gram: Vec<Vec<String>>,
    pub endomorphism: Vec<Vec<String>>,
    pub f: String,
    pub interval: String,
    pub signature: [usize; 2],
}

impl ModelSummary {
    pub fn of(model: &ModelData) -> Self {
        let show = |m: &crate::linalg::Matrix<crate::scalar::Rational>| {
            m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
        };
        let sig = model.expected_signature();
        Self {
            n: model.n(),
            gram: show(model.gram().gram()),
            endomorphism: show(model.endomorphism().matrix()),
            f: model.f_text().into(),
            interval: model.interval().to_string(),
            signature: [sig.plus, sig.minus],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub name: String,
    pub mode: String,
    pub seed: u64,
    pub tolerance: String,
    pub model: Option<ModelSummary>,
    pub sections: Vec<Section>,
    pub status: Status,
}

impl Report {
    pub fn new(name: &str, mode: Mode, seed: u64, model: Option<ModelSummary>, sections: Vec<Section>) -> Self {
        let status = if sections.iter().all(|s| s.status.passed()) { Status::Pass } else { Status::Fail };
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            name: name.into(),
            mode: mode.as_str().into(),
            seed,
            tolerance: mode_tolerance(mode),
            model,
            sections,
            status,
        }
    }

    pub fn passed(&self) -> bool {
        self.status.passed()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {}: {} (mode {}, seed {}, tolerance {})",
            self.tool, self.version, self.name, self.mode, self.seed, self.tolerance
        );
        if let Some(m) = &self.model {
            let _ = writeln!(
                out,
                "model: n = {}, f = {} on {}, signature ({}, {})",
                m.n, m.f, m.interval, m.signature[0], m.signature[1]
            );
        }
        for s in &self.sections {
            let _ = writeln!(out, "[{}] {}", s.status.label(), s.task);
            if let Some(e) = &s.error {
                let _ = writeln!(out, "    error: {e}");
            }
            for c in &s.checks {
                let _ = writeln!(
                    out,
                    "    {} {}: {}  residual {} (tol {})",
                    if c.passed { "ok  " } else { "FAIL" },
                    c.name,
                    c.identity,
                    c.residual,
                    c.tolerance
                );
            }
            if let serde_json::Value::Object(map) = &s.details {
                for (k, v) in map {
                    let _ = writeln!(out, "    {k}: {}", compact(v));
                }
            }
        }
        let _ = writeln!(out, "overall: {}", self.status.label());
        out
    }
}

fn compact(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => {
            let s = other.to_string();
            if s.len() > 160 {
                format!("{}…", &s[..s.char_indices().nth(157).map(|c| c.0).unwrap_or(s.len())])
            } else {
                s
            }
        }
    }
}
