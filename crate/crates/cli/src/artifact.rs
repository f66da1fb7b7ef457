//! Artifact envelopes, CSV tables and the error record.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const TOOL: &str = "morselab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Everything that determines an artifact's bytes: the command with its
/// arguments, the seed, the memory budget and the digests of input files.
#[derive(Debug, Serialize)]
pub struct Config {
    pub command: Value,
    pub seed: u64,
    pub budget_mb: usize,
    pub inputs: Vec<(String, String)>,
}

impl Config {
    pub fn new(command: Value, seed: u64, budget_mb: usize, inputs: &[PathBuf]) -> Result<Config, CliError> {
        let mut digests = Vec::new();
        for p in inputs {
            let bytes = fs::read(p).map_err(|e| CliError::io(p, e))?;
            digests.push((p.display().to_string(), sha256_hex(&bytes)));
        }
        Ok(Config { command, seed, budget_mb, inputs: digests })
    }

    pub fn hash(&self) -> String {
        sha256_hex(serde_json::to_string(self).expect("config serializes").as_bytes())
    }
}

#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Table {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Result of one subcommand.
#[derive(Debug, Default)]
pub struct Outcome {
    pub result: Value,
    pub table: Option<Table>,
    /// `Some(false)` maps to exit status 1.
    pub passed: Option<bool>,
    /// Extra files written next to the JSON artifact.
    pub files: Vec<(String, Vec<u8>)>,
}

impl Outcome {
    pub fn json(result: impl Serialize) -> Result<Outcome, CliError> {
        Ok(Outcome { result: serde_json::to_value(result)?, ..Outcome::default() })
    }

    pub fn with_table(mut self, t: Table) -> Outcome {
        self.table = Some(t);
        self
    }
}

pub fn envelope(name: &str, config: &Config, outcome: &Outcome) -> Value {
    let mut v = json!({
        "tool": TOOL,
        "version": VERSION,
        "command": name,
        "config_hash": config.hash(),
        "config": config,
    });
    if let Some(p) = outcome.passed {
        v["verdict"] = json!(if p { "PASS" } else { "FAIL" });
    }
    v["result"] = outcome.result.clone();
    v
}

pub fn csv_bytes(table: &Table, config_hash: &str) -> Result<Vec<u8>, CliError> {
    let mut out = format!("# {TOOL} {VERSION} config {config_hash}\n").into_bytes();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header)?;
    for r in &table.rows {
        w.write_record(r)?;
    }
    out.extend(w.into_inner().map_err(|e| CliError::Output(e.to_string()))?);
    Ok(out)
}

pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))
}

pub fn error_record(e: &CliError) -> Value {
    let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
    if let Some(line) = e.line() {
        err["line"] = json!(line);
    }
    json!({ "tool": TOOL, "version": VERSION, "error": err })
}
