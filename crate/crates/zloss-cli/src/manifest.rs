//! JSON sidecar recording every resolved parameter of a run, so any output
//! file can be regenerated from its manifest alone.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub tool_version: String,
    pub started_at: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, seed: u64) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            parameters: BTreeMap::new(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_at: chrono::Utc::now().to_rfc3339(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    /// Writes `<out>.manifest.json` next to the output file.
    pub fn write_beside(&self, out: &Path) -> Result<(), CliError> {
        let mut path = out.as_os_str().to_owned();
        path.push(".manifest.json");
        let body = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Runtime(format!("manifest serialization failed: {e}")))?;
        std::fs::write(&path, body)
            .map_err(|e| CliError::Runtime(format!("cannot write manifest: {e}")))?;
        Ok(())
    }
}
