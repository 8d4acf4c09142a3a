//! One JSON manifest per artifact-producing command.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::data::cache::write_atomic;
use crate::error::Result;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Class 0 (T-shirt/top) is trained toward `E = +1`, class 1 (trouser)
/// toward `E = -1`.
pub fn label_map() -> serde_json::Value {
    serde_json::json!({
        "0": { "source_class": "T-shirt/top", "target": 1.0 },
        "1": { "source_class": "Trouser", "target": -1.0 },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub code_version: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub dataset_hash: Option<String>,
    pub label_map: serde_json::Value,
    pub noise_policy: Option<String>,
    pub outputs: Vec<PathBuf>,
    pub started_unix: u64,
    pub finished_unix: u64,
}

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_string(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            config,
            dataset_hash: None,
            label_map: label_map(),
            noise_policy: None,
            outputs: Vec::new(),
            started_unix: unix_now(),
            finished_unix: 0,
        }
    }

    /// Stamps the finish time and writes `manifest.json` into `dir`.
    pub fn finish(mut self, dir: &Path) -> Result<PathBuf> {
        self.finished_unix = unix_now();
        let path = dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(&self)?;
        text.push('\n');
        write_atomic(&path, text.as_bytes())?;
        Ok(path)
    }
}
