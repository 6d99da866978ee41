use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::fail::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Machine-readable record of one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub seed: u64,
    pub inputs: BTreeMap<String, InputDigest>,
    pub outputs: Value,
    pub wall_time_ms: f64,
    pub version: &'static str,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads input files and remembers their digests.
#[derive(Debug, Default)]
pub struct Inputs {
    pub digests: BTreeMap<String, InputDigest>,
}

impl Inputs {
    pub fn read(&mut self, name: &str, path: &Path) -> CliResult<Vec<u8>> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.digests.insert(
            name.to_string(),
            InputDigest {
                path: path.display().to_string(),
                sha256: sha256_hex(&bytes),
            },
        );
        Ok(bytes)
    }

    pub fn read_json(&mut self, name: &str, path: &Path) -> CliResult<Value> {
        let bytes = self.read(name, path)?;
        serde_json::from_slice(&bytes).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}
