use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::config::Config;
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to reproduce a stage's outputs: the tool version, the
/// resolved config and every derived seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub master_seed: u64,
    pub config: Config,
    pub seeds: BTreeMap<String, u64>,
    pub created_unix: u64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: &Config) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            master_seed: config.seed,
            config: config.clone(),
            seeds: BTreeMap::new(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            outputs: Vec::new(),
        }
    }

    pub fn seed(&self, name: &str) -> Result<u64> {
        self.seeds
            .get(name)
            .copied()
            .ok_or_else(|| Error::Data(format!("manifest has no `{name}` seed")))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Data(format!("cannot read {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}
