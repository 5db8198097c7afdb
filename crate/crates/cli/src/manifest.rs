//! Run manifests: one JSON sidecar per invocation, recording the exact
//! parameters, seed, tool version, timestamps, and every file written.

use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde_json::{json, Map, Value};

use crate::CliError;

pub struct ManifestBuilder {
    command: String,
    parameters: Map<String, Value>,
    master_seed: Option<u64>,
    started_at: String,
}

impl ManifestBuilder {
    pub fn start(command: &str) -> Self {
        ManifestBuilder {
            command: command.to_string(),
            parameters: Map::new(),
            master_seed: None,
            started_at: now(),
        }
    }

    pub fn parameter(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn master_seed(&mut self, seed: u64) -> &mut Self {
        self.master_seed = Some(seed);
        self
    }

    /// Writes `<primary_output>.manifest.json` listing all outputs.
    pub fn finish(self, primary_output: &Path, outputs: &[PathBuf]) -> Result<PathBuf, CliError> {
        let manifest_path = sidecar_path(primary_output);
        let argv: Vec<String> = std::env::args().collect();
        let doc = json!({
            "schema": "qpi.manifest.v1",
            "command": self.command,
            "argv": argv,
            "parameters": Value::Object(self.parameters),
            "master_seed": self.master_seed,
            "version": env!("CARGO_PKG_VERSION"),
            "started_at": self.started_at,
            "finished_at": now(),
            "outputs": outputs
                .iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>(),
        });
        let text = serde_json::to_string_pretty(&doc)
            .map_err(|e| CliError::Io(format!("manifest serialization: {e}")))?;
        std::fs::write(&manifest_path, text + "\n")
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", manifest_path.display())))?;
        Ok(manifest_path)
    }
}

pub fn sidecar_path(primary_output: &Path) -> PathBuf {
    let mut name = primary_output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    primary_output.with_file_name(name)
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}
