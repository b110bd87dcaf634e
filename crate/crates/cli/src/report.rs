//! Reports, thresholds and canonical output writers.

use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// `pass = residual < threshold`; NaN fails.
    pub fn measured(name: &str, residual: f64, threshold: f64) -> Check {
        let pass = residual < threshold;
        Check {
            name: name.to_string(),
            residual: Some(residual),
            threshold,
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            note: None,
        }
    }

    pub fn skipped(name: &str, threshold: f64, note: impl Into<String>) -> Check {
        Check { name: name.to_string(), residual: None, threshold, pass: true, status: Status::Skipped, note: Some(note.into()) }
    }

    pub fn failed(name: &str, threshold: f64, note: impl Into<String>) -> Check {
        Check { name: name.to_string(), residual: None, threshold, pass: false, status: Status::Fail, note: Some(note.into()) }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    /// File names relative to the output directory.
    pub artifacts: Vec<String>,
    pub versions: BTreeMap<String, String>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, config: Value, checks: Vec<Check>, artifacts: Vec<String>) -> Report {
        let mut versions = BTreeMap::new();
        versions.insert("plie".to_string(), env!("CARGO_PKG_VERSION").to_string());
        versions.insert("report_schema".to_string(), "1".to_string());
        let pass = checks.iter().all(|c| c.pass);
        Report { command: command.to_string(), config, checks, artifacts, versions, pass }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Default thresholds with user overrides; overriding an unknown name is an error.
#[derive(Debug, Clone)]
pub struct Thresholds {
    values: BTreeMap<String, f64>,
}

impl Thresholds {
    pub fn new(defaults: &[(&str, f64)], overrides: &BTreeMap<String, f64>) -> Result<Thresholds, CliError> {
        let mut values: BTreeMap<String, f64> = defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (k, v) in overrides {
            match values.get_mut(k) {
                Some(slot) => *slot = *v,
                None => {
                    let known: Vec<&str> = defaults.iter().map(|(k, _)| *k).collect();
                    return Err(CliError::Config(format!("unknown tolerance \"{k}\"; known: {}", known.join(", "))));
                }
            }
        }
        Ok(Thresholds { values })
    }

    pub fn get(&self, name: &str) -> f64 {
        self.values[name]
    }

    pub fn check(&self, name: &str, residual: f64) -> Check {
        Check::measured(name, residual, self.get(name))
    }
}

fn format_number(n: &serde_json::Number) -> String {
    if n.is_f64() {
        let x = n.as_f64().unwrap_or(f64::NAN);
        format!("{x:.16e}")
    } else {
        n.to_string()
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&format_number(n)),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            if items.iter().all(|i| !i.is_array() && !i.is_object()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, item, indent + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let sorted: BTreeMap<&String, &Value> = map.iter().collect();
            out.push_str("{\n");
            for (k, (key, item)) in sorted.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(indent + 1), Value::String((*key).clone()));
                write_value(out, item, indent + 1);
                out.push_str(if k + 1 < sorted.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// JSON with sorted keys and every float printed with 17 significant digits.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<String, CliError> {
    let text = canonical_json(value)?;
    std::fs::write(dir.join(name), text).map_err(|e| CliError::Io(format!("{name}: {e}")))?;
    Ok(name.to_string())
}

/// CSV cell for a float, in the same 17-digit format as the JSON.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(dir: &Path, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let io = |e: csv::Error| CliError::Io(format!("{name}: {e}"));
    let mut w = csv::Writer::from_path(dir.join(name)).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{name}: {e}")))?;
    Ok(name.to_string())
}
