//! Shared report plumbing: map input, the JSON envelope, output.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sublevel::PolynomialMap;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
/// Report field holding wall-clock metadata. It is the only field that
/// varies between identical runs.
pub const TIMESTAMP_FIELD: &str = "generated_at";

/// The maps bundled by `--preset paper-examples`, as `(text, n)`.
pub const PAPER_EXAMPLES: [(&str, usize); 5] = [
    ("x1^2 + x2^2", 2),
    ("x1^6 + x2^4", 2),
    ("x1*x2", 2),
    ("x1^2 - x2^2", 2),
    ("x1^2*x2; x1*x2^2", 2),
];

/// One map to analyse, with the text it came from.
pub struct MapInput {
    pub text: String,
    pub n: usize,
    pub map: PolynomialMap,
}

impl MapInput {
    pub fn parse(text: &str, n: usize) -> Result<Self, CliError> {
        let map = PolynomialMap::parse(text, n)?;
        Ok(MapInput {
            text: text.to_string(),
            n,
            map,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "map": self.text,
            "canonical": self.map.to_string(),
            "n": self.n,
            "m": self.map.len(),
        })
    }
}

/// Reads the map from `-f` text or `--file`. Blank lines and `#` comments in
/// a file are ignored, and the remaining lines are joined as components.
pub fn read_map(text: Option<&str>, file: Option<&Path>, n: Option<usize>) -> Result<MapInput, CliError> {
    let n = n.ok_or_else(|| CliError::Usage("missing -n <dim>".into()))?;
    let source = match (text, file) {
        (Some(t), None) => t.to_string(),
        (None, Some(path)) => fs::read_to_string(path)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("; "),
        (Some(_), Some(_)) => return Err(CliError::Usage("give either -f or --file, not both".into())),
        (None, None) => return Err(CliError::Usage("missing map: use -f <text> or --file <path>".into())),
    };
    MapInput::parse(&source, n)
}

pub fn preset_inputs(name: &str) -> Result<Vec<MapInput>, CliError> {
    match name {
        "paper-examples" => PAPER_EXAMPLES.iter().map(|(t, n)| MapInput::parse(t, *n)).collect(),
        other => Err(CliError::Usage(format!(
            "unknown preset '{other}' (known: paper-examples)"
        ))),
    }
}

/// Wraps a command body with schema, version, seed and timestamp.
pub fn envelope(command: &str, seed: u64, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!(command));
    out.insert("versions".into(), json!({"sublevel": env!("CARGO_PKG_VERSION")}));
    out.insert("seed".into(), json!(seed));
    out.insert(
        TIMESTAMP_FIELD.into(),
        json!(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
    );
    if let Value::Object(fields) = body {
        out.extend(fields);
    }
    Value::Object(out)
}

pub fn write_report(report: &Value, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).expect("JSON values always serialize") + "\n";
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
