//! Report bundles and their files: manifest.json, summary.json, *.csv.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Number, Value};
use sha2::{Digest, Sha256};

use saddle_pressure::scalar::sig12;

use crate::config::ExperimentConfig;

/// A CSV table held as already-formatted cells.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// Cell formatting.
pub fn num(x: f64) -> String {
    sig12(x)
}

pub fn int(x: usize) -> String {
    x.to_string()
}

pub fn flag(x: bool) -> String {
    x.to_string()
}

/// Everything one command produced, before it touches the disk.
#[derive(Clone, Debug, Default)]
pub struct ReportBundle {
    pub summary: Map<String, Value>,
    pub tables: Vec<Table>,
    /// Inequality checks, one "name: PASS|FAIL (...)" row each.
    pub ledger: Vec<String>,
}

impl ReportBundle {
    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("summary values serialize");
        self.summary.insert(key.to_string(), v);
    }

    pub fn table(&mut self, t: Table) {
        self.tables.push(t);
    }

    /// True when every ledger row passed.
    pub fn all_pass(&self) -> bool {
        self.ledger.iter().all(|r| r.contains(": PASS"))
    }
}

/// Rounds every float in a JSON tree to 12 significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r: f64 = sig12(x).parse().unwrap_or(x);
            *n = Number::from_f64(r).unwrap_or_else(|| n.clone());
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// RFC 3339 time for the manifest. SOURCE_DATE_EPOCH, when set, pins it so
/// reruns produce identical manifests.
pub fn timestamp() -> String {
    let secs = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok());
    let t = match secs {
        Some(s) => chrono::DateTime::from_timestamp(s, 0).unwrap_or_default(),
        None => chrono::Utc::now(),
    };
    t.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Files written for one run.
#[derive(Clone, Debug)]
pub struct Emitted {
    pub dir: PathBuf,
    pub files: Vec<String>,
}

/// Writes tables, summary and manifest into `dir`.
pub fn emit(
    bundle: &ReportBundle,
    dir: &Path,
    command: &str,
    config: &ExperimentConfig,
    input: &[u8],
    started: &str,
) -> std::io::Result<Emitted> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for t in &bundle.tables {
        fs::write(dir.join(t.file_name()), t.render())?;
        files.push(t.file_name());
    }

    let mut summary = Value::Object(bundle.summary.clone());
    summary["command"] = json!(command);
    summary["tables"] = json!(bundle.tables.iter().map(|t| t.file_name()).collect::<Vec<_>>());
    summary["ledger"] = json!(bundle.ledger);
    round_floats(&mut summary);
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    fs::write(dir.join("summary.json"), text)?;
    files.push("summary.json".to_string());

    let canonical = config.to_toml();
    let manifest = json!({
        "tool": "spress",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config_sha256": sha256_hex(canonical.as_bytes()),
        "input_sha256": sha256_hex(input),
        "config_toml": canonical,
        "config": serde_json::to_value(config).expect("config serializes"),
        "started": started,
        "finished": timestamp(),
        "files": files,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    fs::write(dir.join("manifest.json"), text)?;
    files.push("manifest.json".to_string());

    Ok(Emitted {
        dir: dir.to_path_buf(),
        files,
    })
}
