//! File loading and JSON output shared by every command.

use crate::error::{domain, usage, CliError};
use clap::ValueEnum;
use qmc::space::io::{parse_edges, parse_matrix, write_edges, write_matrix};
use qmc::{DistanceMatrix, Mode, QuasiMetric};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::io::{Read, Write};
use std::path::Path;

pub const SCHEMA: u64 = 1;
const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// Matrix if the first line holds one number, edge list if it holds two.
    Auto,
    Matrix,
    Edges,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Matrix,
    Edges,
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))
}

fn detect(text: &str) -> InputFormat {
    let header = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    match header.map(|l| l.split_whitespace().count()) {
        Some(2) => InputFormat::Edges,
        _ => InputFormat::Matrix,
    }
}

pub fn load_space(path: &Path, format: InputFormat, mode: Mode) -> Result<QuasiMetric, CliError> {
    let text = read_text(path)?;
    let format = if format == InputFormat::Auto { detect(&text) } else { format };
    let parsed = match format {
        InputFormat::Edges => parse_edges(&text, mode),
        _ => parse_matrix(&text, mode),
    };
    parsed.map_err(|e| match CliError::from(e) {
        CliError::Usage(m) => usage(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Refuse to work on a space that breaks the axioms.
pub fn require_valid(space: &QuasiMetric, tolerance: f64) -> Result<(), CliError> {
    let report = space.validate(tolerance);
    if report.passed {
        return Ok(());
    }
    Err(domain(format!(
        "input is not a quasi-metric ({} triangle violations, {} negative, {} nonzero diagonal); \
         run `qmc validate` for details or pass --no-validate",
        report.violation_count,
        report.negative_entries.len(),
        report.nonzero_diagonal.len()
    )))
}

pub fn render_space<M: DistanceMatrix + ?Sized>(m: &M, format: OutputFormat, comment: &str) -> String {
    match format {
        OutputFormat::Matrix => write_matrix(m, Some(comment)),
        OutputFormat::Edges => write_edges(m, Some(comment)),
    }
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("writing {}: {e}", p.display()))),
        None => {
            stdout(text);
            Ok(())
        }
    }
}

pub fn to_value<T: Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize to JSON")
}

fn round(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Round every non-integer number to 12 significant digits.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n.as_f64().map(|x| json!(round(x))).unwrap_or(Value::Number(n)),
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

/// The versioned envelope: `schema`, `command`, then the command's fields.
pub fn envelope(command: &str, fields: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), json!(SCHEMA));
    map.insert("command".into(), json!(command));
    if let Value::Object(f) = fields {
        map.extend(f);
    }
    round_floats(Value::Object(map))
}

pub fn emit(command: &str, fields: Value) {
    let v = envelope(command, fields);
    stdout(&(serde_json::to_string_pretty(&v).expect("JSON values print") + "\n"));
}

/// Write to stdout; a closed pipe (`qmc ... | head`) just ends the output.
fn stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

pub fn write_json(path: &Path, v: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).expect("JSON values print") + "\n";
    std::fs::write(path, text).map_err(|e| usage(format!("writing {}: {e}", path.display())))
}

/// Human-readable side channel; silenced by `--quiet`.
pub struct Log {
    pub quiet: bool,
}

impl Log {
    pub fn line(&self, s: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", s.as_ref());
        }
    }
}

pub fn fmt_num(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{}", round(x))
    }
}
