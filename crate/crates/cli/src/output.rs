use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use robust_gates::manifest::{sha256_hex, FileDigest, RunManifest};

/// Writes outputs into one directory and records each in the command's
/// manifest. Output paths are stored relative to the directory so that
/// manifests compare equal across output locations.
pub struct OutDir {
    dir: PathBuf,
    manifest: RunManifest,
}

impl OutDir {
    pub fn new(dir: &Path, manifest: RunManifest) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
            manifest,
        })
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.manifest
            .add_input(path)
            .with_context(|| format!("reading {}", path.display()))
    }

    fn put(&mut self, name: &str, bytes: Vec<u8>) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, &bytes).with_context(|| format!("writing {}", path.display()))?;
        self.manifest.outputs.push(FileDigest {
            path: name.to_owned(),
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.put(name, text.into_bytes())
    }

    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
        self.put(name, bytes)
    }

    /// Raw bytes produced by a core writer.
    pub fn bytes(&mut self, name: &str, bytes: Vec<u8>) -> Result<()> {
        self.put(name, bytes)
    }

    pub fn finish(self) -> Result<()> {
        let name = format!("{}.manifest.json", self.manifest.command);
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        let path = self.dir.join(&name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}

pub fn num(x: f64) -> String {
    x.to_string()
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
