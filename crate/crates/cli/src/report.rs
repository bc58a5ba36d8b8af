use std::fmt::Write as _;
use std::process::ExitCode;

use lbconn::algebra::UnitMonomial;
use lbconn::cech::{Certificate, FormCochain, UnitCochain};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    NoSolution,
    Error,
}

/// Outcome of one command. Maps inside `payload` are ordered by key, so
/// serializing the same report twice gives the same bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub payload: Value,
}

impl Report {
    pub fn ok(command: &str, payload: Value) -> Self {
        Self::with_status(command, Status::Ok, payload)
    }

    pub fn with_status(command: &str, status: Status, payload: Value) -> Self {
        Self {
            command: command.to_string(),
            status,
            payload,
        }
    }

    pub fn error(command: &str, message: impl std::fmt::Display) -> Self {
        Self::with_status(
            command,
            Status::Error,
            json!({ "message": message.to_string() }),
        )
    }

    pub fn exit_code(&self) -> ExitCode {
        match self.status {
            Status::Ok | Status::NoSolution => ExitCode::SUCCESS,
            Status::Error => ExitCode::FAILURE,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_human(&self) -> String {
        let status = serde_json::to_value(self.status).expect("status serializes");
        let mut out = format!(
            "{}: {}\n",
            self.command,
            status.as_str().unwrap_or_default()
        );
        if let Some(rows) = self.payload.get("rows").and_then(Value::as_array) {
            for r in rows {
                let pass = r["pass"].as_bool().unwrap_or(false);
                let _ = writeln!(
                    out,
                    "{} {:<4} {}: expected {}, got {}",
                    if pass { "PASS" } else { "FAIL" },
                    r["id"].as_str().unwrap_or_default(),
                    r["check"].as_str().unwrap_or_default(),
                    r["expected"].as_str().unwrap_or_default(),
                    r["actual"].as_str().unwrap_or_default(),
                );
            }
            if let Some(m) = self.payload.get("message").and_then(Value::as_str) {
                let _ = writeln!(out, "{}", m);
            }
            return out;
        }
        render(&mut out, &self.payload, 1);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        Value::Object(_) => None,
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(v.to_string())
        }
        Value::Array(items) if items.iter().all(|x| scalar(x).is_some() && x.is_array()) => {
            Some(v.to_string())
        }
        Value::Array(_) => None,
        other => Some(other.to_string()),
    }
}

fn render(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render(out, x, indent + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

pub fn unit_json(u: &UnitMonomial) -> Value {
    json!({ "coeff": u.coeff().to_string(), "exponent": u.exponent() })
}

/// Every entry of a unit cochain, including the trivial ones.
pub fn unit_cochain_json(c: &UnitCochain) -> Value {
    let key = if c.degree() == 0 { "chart" } else { "pair" };
    Value::Array(
        c.entries()
            .into_iter()
            .map(|(idx, u)| {
                let mut v = unit_json(&u);
                let id = if c.degree() == 0 {
                    json!(idx[0])
                } else {
                    json!(idx)
                };
                v[key] = id;
                v
            })
            .collect(),
    )
}

/// The local forms of a 0-cochain, one entry per chart.
pub fn forms_json(c: &FormCochain) -> Value {
    Value::Array(
        (0..c.atlas().len())
            .map(|i| json!({ "chart": i, "form": c.local(i).to_string() }))
            .collect(),
    )
}

pub fn certificate_json(c: &Certificate) -> Value {
    json!({ "multidegree": c.multidegree, "chart": c.chart })
}
