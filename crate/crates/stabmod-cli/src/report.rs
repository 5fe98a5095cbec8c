//! Report assembly and the content-addressed cache.
//!
//! Every subcommand produces a [`Report`]: a list of text lines and a JSON
//! mirror carrying the same numbers. Reports are deterministic for a given
//! config and seed, so they can be cached whole, keyed by a hash of the
//! resolved inputs; a cache hit replays the exact bytes.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// A finished subcommand result: human lines, machine mirror, verdict.
#[derive(Debug)]
pub struct Report {
    pub text: Vec<String>,
    pub json: Value,
    pub pass: bool,
}

impl Report {
    pub fn new() -> Report {
        Report { text: Vec::new(), json: json!({}), pass: true }
    }

    /// Add a text line.
    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    /// Set a field in the JSON mirror.
    pub fn field(&mut self, key: &str, value: Value) {
        self.json[key] = value;
    }

    /// Record the verdict in both views.
    pub fn verdict(&mut self, pass: bool) {
        self.pass = pass;
        self.field("pass", json!(pass));
        self.line(format!("pass: {}", if pass { "yes" } else { "no" }));
    }

    /// Render the requested format to stdout.
    pub fn emit(&self, json_mode: bool) {
        if json_mode {
            println!("{}", serde_json::to_string_pretty(&self.json).expect("mirror serializes"));
        } else {
            for l in &self.text {
                println!("{l}");
            }
        }
    }
}

/// Degree/dimension pairs as a JSON array.
pub fn dims_json(dims: &[(i64, usize)]) -> Value {
    Value::Array(dims.iter().map(|&(d, n)| json!([d, n])).collect())
}

/// Degree/dimension pairs as compact text: `0:1 2:3`.
pub fn dims_text(dims: &[(i64, usize)]) -> String {
    if dims.is_empty() {
        return "(zero)".into();
    }
    dims.iter().map(|(d, n)| format!("{d}:{n}")).collect::<Vec<_>>().join(" ")
}

/// Stable hex fingerprint of the parts that determine a report.
pub fn content_key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Look up a cached report by key.
pub fn cache_load(dir: &Path, key: &str) -> Option<Report> {
    let path = cache_path(dir, key);
    let raw = fs::read_to_string(path).ok()?;
    let v: Value = serde_json::from_str(&raw).ok()?;
    let text = v["text"]
        .as_array()?
        .iter()
        .map(|l| l.as_str().map(String::from))
        .collect::<Option<Vec<_>>>()?;
    let pass = v["pass"].as_bool()?;
    Some(Report { text, json: v["report"].clone(), pass })
}

/// Persist a report under its key; failures to write are ignored (the cache
/// is an optimization, never load-bearing).
pub fn cache_store(dir: &Path, key: &str, report: &Report) {
    let envelope = json!({
        "pass": report.pass,
        "report": report.json,
        "text": report.text,
    });
    if fs::create_dir_all(dir).is_ok() {
        let _ = fs::write(
            cache_path(dir, key),
            serde_json::to_string_pretty(&envelope).expect("envelope serializes"),
        );
    }
}

fn cache_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}
