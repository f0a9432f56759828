//! Run manifests: config echo, content hashes and output paths.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::{io_error, CliResult};

/// SHA-256 over `blob <len>\0<content>`, hex encoded.
pub fn git_style_hash(content: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Keys sorted at every level, no insignificant whitespace.
pub fn canonical_json(value: &Value) -> String {
    fn sorted(v: &Value) -> Value {
        match v {
            Value::Object(map) => {
                let mut keys: Vec<&String> = map.keys().collect();
                keys.sort();
                Value::Object(keys.into_iter().map(|k| (k.clone(), sorted(&map[k]))).collect())
            }
            Value::Array(items) => Value::Array(items.iter().map(sorted).collect()),
            other => other.clone(),
        }
    }
    serde_json::to_string(&sorted(value)).expect("values always serialise")
}

#[derive(Debug, Serialize)]
pub struct OutputEntry {
    pub path: String,
    pub hash: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub input_hash: String,
    pub seed: Option<u64>,
    pub outputs: Vec<OutputEntry>,
}

impl RunManifest {
    pub fn new(command: &'static str, config: Value, seed: Option<u64>) -> Self {
        let input_hash = git_style_hash(canonical_json(&config).as_bytes());
        Self {
            tool: "qss",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            input_hash,
            seed,
            outputs: Vec::new(),
        }
    }

    /// Write `content` to `path` and record it.
    pub fn emit(&mut self, path: &Path, content: &str) -> CliResult<()> {
        fs::write(path, content).map_err(|e| io_error(path, e))?;
        self.outputs.push(OutputEntry {
            path: path.display().to_string(),
            hash: git_style_hash(content.as_bytes()),
        });
        Ok(())
    }

    pub fn write(&self, path: &Path) -> CliResult<PathBuf> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serialises");
        text.push('\n');
        fs::write(path, text).map_err(|e| io_error(path, e))?;
        Ok(path.to_path_buf())
    }
}
