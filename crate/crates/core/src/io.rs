//! Stage artifacts: path-aware file access, atomic writes and per-stage
//! manifests of SHA-256 content hashes.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?))
}

/// Opens an input produced by `stage`, failing with an error naming that
/// stage when it is absent.
pub fn open_artifact(path: &Path, stage: &'static str) -> Result<BufReader<File>> {
    require(path, stage)?;
    open(path)
}

pub fn require(path: &Path, stage: &'static str) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(Error::MissingArtifact {
            path: path.to_path_buf(),
            stage,
        })
    }
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes `bytes` through a temporary sibling and a rename, so a reader never
/// sees a partial file. Returns the content hash.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<String> {
    if let Some(parent) = path.parent() {
        create_dir(parent)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    drop(f);
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(bytes))
}

/// Output files of one stage with their content hashes, keyed by path
/// relative to the output directory.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub stage: String,
    pub files: BTreeMap<String, String>,
}

/// Collects a stage's outputs under one root directory.
pub struct ArtifactWriter {
    root: PathBuf,
    manifest: Manifest,
}

impl ArtifactWriter {
    pub fn new(root: &Path, stage: &str) -> Self {
        Self {
            root: root.to_path_buf(),
            manifest: Manifest {
                stage: stage.into(),
                files: BTreeMap::new(),
            },
        }
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.path(rel);
        let hash = write_atomic(&path, bytes)?;
        self.manifest.files.insert(rel.to_string(), hash);
        Ok(path)
    }

    /// Renders with `f` into memory, then writes.
    pub fn write_with<F>(&mut self, rel: &str, f: F) -> Result<PathBuf>
    where
        F: FnOnce(&mut Vec<u8>) -> Result<()>,
    {
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.write(rel, &buf)
    }

    /// Writes `<stage>/manifest.json` and returns the manifest.
    pub fn finish(self) -> Result<Manifest> {
        let mut json = serde_json::to_vec_pretty(&self.manifest)?;
        json.push(b'\n');
        write_atomic(&self.root.join(&self.manifest.stage).join("manifest.json"), &json)?;
        Ok(self.manifest)
    }
}
