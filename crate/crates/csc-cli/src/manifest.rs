//! Reproducibility manifests written beside command outputs.
//!
//! A manifest records the tool version, the argument vector (minus `--jobs`,
//! which never affects output bytes), the master seed, and SHA-256 digests of
//! every input and output file. It contains no timestamps or host details:
//! two runs with the same inputs and flags write byte-identical manifests.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use csc_core::io::sha256_hex;

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct DatasetEntry {
    pub name: String,
    pub file: String,
    pub p_e: f64,
    pub seed: u64,
    pub sentences: u64,
    pub errors: u64,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub subcommand: String,
    /// Arguments after the subcommand, `--jobs` stripped.
    pub argv: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    /// Input path -> SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    /// Output file name -> SHA-256 of its bytes; files sit beside this
    /// manifest.
    pub outputs: BTreeMap<String, String>,
    pub counters: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub datasets: Vec<DatasetEntry>,
}

impl RunManifest {
    pub fn new(subcommand: &str, argv: Vec<String>, master_seed: Option<u64>) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            argv,
            master_seed,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            counters: BTreeMap::new(),
            datasets: Vec::new(),
        }
    }

    pub fn record_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs
            .insert(path.display().to_string(), sha256_hex(bytes));
    }

    /// Writes `bytes` to `path` and records the digest under the file name.
    pub fn write_output(&mut self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        fs::write(path, bytes)
            .map_err(|e| CliError::data(format!("writing {}: {e}", path.display())))?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        self.outputs.insert(name, sha256_hex(bytes));
        Ok(())
    }

    pub fn count(&mut self, key: &str, value: u64) {
        self.counters.insert(key.to_string(), value);
    }

    /// Serializes to `path` (pretty JSON, trailing newline).
    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(self)
            .map_err(|e| CliError::data(format!("encoding manifest: {e}")))?;
        bytes.push(b'\n');
        fs::write(path, bytes)
            .map_err(|e| CliError::data(format!("writing {}: {e}", path.display())))
    }
}

/// Manifest path for a command that fills a directory.
pub fn dir_manifest_path(out_dir: &Path) -> PathBuf {
    out_dir.join("manifest.json")
}

/// Manifest path for a command that writes one file.
pub fn sibling_manifest_path(out_file: &Path) -> PathBuf {
    let mut name = out_file
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.push_str(".manifest.json");
    out_file.with_file_name(name)
}
