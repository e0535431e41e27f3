use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Divergent,
    Error,
}

#[derive(Serialize, Clone, Debug)]
pub struct InputDigest {
    pub name: String,
    pub path: String,
    pub sha256: String,
}

/// What a command produced, before it is wrapped into a report.
#[derive(Debug)]
pub enum Outcome {
    Pass(Value),
    Fail(Value),
    /// Undecided within the configured limits; carries a certificate or
    /// the limit that was hit.
    Divergent(Value),
    Parse(String),
    Invalid(String),
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub result: Value,
    /// Lines shown instead of the result in text format.
    #[serde(skip)]
    pub summary: Vec<String>,
}

#[derive(Serialize, Debug)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

impl Report {
    pub fn new(command: String, inputs: Vec<InputDigest>, outcome: Outcome) -> Report {
        let (status, error, result) = match outcome {
            Outcome::Pass(v) => (Status::Pass, None, v),
            Outcome::Fail(v) => (Status::Fail, None, v),
            Outcome::Divergent(v) => (Status::Divergent, None, v),
            Outcome::Parse(message) => (
                Status::Error,
                Some(ErrorInfo {
                    kind: "parse",
                    message,
                }),
                Value::Null,
            ),
            Outcome::Invalid(message) => (
                Status::Error,
                Some(ErrorInfo {
                    kind: "validation",
                    message,
                }),
                Value::Null,
            ),
        };
        Report {
            tool: "fibcat",
            version: env!("CARGO_PKG_VERSION"),
            command,
            status,
            inputs,
            error,
            result,
            summary: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        fibcat::io::render(self)
    }

    pub fn to_text(&self) -> String {
        let status = serde_json::to_value(self.status).expect("status serializes");
        let mut out = format!(
            "{} {}: {}\n",
            self.tool,
            self.command,
            status.as_str().unwrap_or_default()
        );
        for i in &self.inputs {
            let _ = writeln!(out, "  input {} {} sha256:{}", i.name, i.path, i.sha256);
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "  {} error: {}", e.kind, e.message);
        }
        if !self.summary.is_empty() {
            for line in &self.summary {
                let _ = writeln!(out, "  {line}");
            }
        } else if let Value::Object(map) = &self.result {
            for (k, v) in map {
                let _ = writeln!(out, "  {k}: {}", one_line(v));
            }
        } else if !self.result.is_null() {
            let _ = writeln!(out, "  {}", one_line(&self.result));
        }
        out
    }
}

fn one_line(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        _ => serde_json::to_string(v).expect("value serializes"),
    }
}
