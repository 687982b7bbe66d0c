//! JSON reports, error objects and atomic output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::statevec::Distribution;

/// Bumped whenever a field in `schema/report.schema.json` changes.
pub const REPORT_VERSION: &str = "qdesk-report/1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    pub result: Value,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are always serializable");
        s.push('\n');
        s
    }
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn sig12_all(xs: &[f64]) -> Vec<f64> {
    xs.iter().copied().map(sig12).collect()
}

/// `{bitstring: probability}` over the support of the distribution.
pub fn distribution_json(dist: &Distribution) -> Value {
    let map: Map<String, Value> = dist
        .bitstring_entries()
        .into_iter()
        .map(|(k, p)| (k, json!(sig12(p))))
        .collect();
    Value::Object(map)
}

/// Writes `contents` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), Error> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}

/// Broad category of a failure, also used to pick the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Resource,
    Algorithm,
    Io,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Usage => "usage",
            ErrorKind::Resource => "resource",
            ErrorKind::Algorithm => "algorithm",
            ErrorKind::Io => "io",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 2,
            ErrorKind::Resource => 3,
            ErrorKind::Algorithm => 4,
            ErrorKind::Io => 5,
        }
    }
}

pub fn classify(e: &Error) -> ErrorKind {
    match e {
        Error::TooManyQubits { .. } => ErrorKind::Resource,
        Error::InconsistentSamples(_) | Error::RoundsExhausted { .. } => ErrorKind::Algorithm,
        Error::Io(_) => ErrorKind::Io,
        _ => ErrorKind::Usage,
    }
}

/// `{"error": {...}}` describing `e`.
pub fn error_json(e: &Error) -> Value {
    let kind = classify(e);
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(kind.as_str()));
    obj.insert("message".into(), json!(e.to_string()));
    match e {
        Error::InvalidArgument { field, .. } => {
            obj.insert("field".into(), json!(field));
        }
        Error::TooManyQubits { required, cap } => {
            obj.insert("required_qubits".into(), json!(required));
            obj.insert("cap".into(), json!(cap));
        }
        Error::Parse { line, column, .. } => {
            obj.insert("line".into(), json!(line));
            obj.insert("column".into(), json!(column));
        }
        _ => {}
    }
    json!({ "error": Value::Object(obj) })
}
