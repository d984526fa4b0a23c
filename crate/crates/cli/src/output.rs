//! Buffered output files and the result manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Command, RunConfig};
use crate::error::{CliError, Result};

pub const MANIFEST: &str = "manifest.json";

/// Files produced by a command, kept in memory until the run succeeds.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, path: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((path.into(), bytes));
    }

    /// Runs `f` on a fresh buffer and stores the result under `path`.
    pub fn write_with<F>(&mut self, path: impl Into<String>, f: F) -> Result<()>
    where
        F: FnOnce(&mut Vec<u8>) -> dqpt_core::Result<()>,
    {
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.add(path, buf);
        Ok(())
    }

    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(p, _)| p.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: Command,
    pub version: String,
    pub seed: u64,
    pub config: RunConfig,
    pub files: Vec<FileEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes every file under `cfg.out` plus `manifest.json`; returns the manifest.
pub fn commit(command: Command, cfg: &RunConfig, outputs: Outputs) -> Result<Manifest> {
    let mut files = outputs.files;
    files.sort_by(|a, b| a.0.cmp(&b.0));
    let mut entries = Vec::with_capacity(files.len());
    for (rel, bytes) in &files {
        write_file(&cfg.out.join(rel), bytes)?;
        entries.push(FileEntry {
            path: rel.clone(),
            sha256: sha256_hex(bytes),
        });
    }
    let manifest = Manifest {
        command,
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.shots.seed,
        config: cfg.clone(),
        files: entries,
    };
    let mut text = serde_json::to_vec_pretty(&manifest).map_err(dqpt_core::Error::from)?;
    text.push(b'\n');
    write_file(&cfg.out.join(MANIFEST), &text)?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path: PathBuf = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::config("manifest", e.to_string()))
}
