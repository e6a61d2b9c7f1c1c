//! Artifact emission: deterministic rendering, atomic writes, digests,
//! and the run manifest.
//!
//! Every command produces exactly one document. With `--out` the
//! document is written atomically (temp file in the target directory,
//! then rename) so an interrupted run never leaves a partial file at
//! the final path; without it the bytes go to stdout. Either way the
//! SHA-256 digest of the exact bytes is recorded in the manifest.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use weyl_lab::util::g15;
use weyl_lab::Result;

/// One finished document, ready to emit.
pub struct Document {
    pub bytes: Vec<u8>,
}

impl Document {
    pub fn binary(bytes: Vec<u8>) -> Document {
        Document { bytes }
    }

    pub fn text(text: String) -> Document {
        Document {
            bytes: text.into_bytes(),
        }
    }

    /// Serialize as pretty JSON with every float rounded to the value
    /// that 15 significant digits can carry, so output bytes never
    /// depend on excess binary precision.
    pub fn json<T: Serialize>(value: &T) -> Result<Document> {
        let mut tree = serde_json::to_value(value).map_err(to_io)?;
        round_floats(&mut tree);
        let mut text = serde_json::to_string_pretty(&tree).map_err(to_io)?;
        text.push('\n');
        Ok(Document::text(text))
    }
}

fn to_io(e: serde_json::Error) -> weyl_lab::Error {
    weyl_lab::Error::Io(std::io::Error::other(e))
}

/// Round every JSON number that is carried as a float to 15
/// significant digits, recursing through the tree.
fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if !n.is_i64() && !n.is_u64() {
                if let Some(f) = n.as_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(g15(f)) {
                        *value = Value::Number(rounded);
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("{:x}", hasher.finalize())
}

/// Write bytes to `path` atomically: temp file in the same directory,
/// flushed, then renamed over the destination.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| weyl_lab::Error::Io(e.error))?;
    Ok(())
}

/// Record of one emitted artifact.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ArtifactRecord {
    /// Destination path, or "-" for stdout.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Full record of one run: the exact configuration, version, wall
/// times, and a digest for every artifact.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub version: String,
    pub config: Value,
    pub started_at: String,
    pub finished_at: String,
    pub artifacts: Vec<ArtifactRecord>,
}

/// Emit the document (atomically to `out`, else stdout), then write the
/// manifest if requested. Returns the artifact record.
pub fn emit(
    doc: &Document,
    out: Option<&PathBuf>,
    quiet_digest: bool,
) -> Result<ArtifactRecord> {
    let record = ArtifactRecord {
        path: out
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "-".to_string()),
        sha256: sha256_hex(&doc.bytes),
        bytes: doc.bytes.len() as u64,
    };
    match out {
        Some(path) => {
            atomic_write(path, &doc.bytes)?;
            if !quiet_digest {
                println!("wrote {} ({} bytes, sha256 {})", record.path, record.bytes, record.sha256);
            }
        }
        None => {
            std::io::stdout().write_all(&doc.bytes)?;
        }
    }
    Ok(record)
}

pub fn write_manifest(
    path: &Path,
    config: Value,
    started_at: String,
    artifacts: Vec<ArtifactRecord>,
) -> Result<()> {
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config,
        started_at,
        finished_at: chrono::Utc::now().to_rfc3339(),
        artifacts,
    };
    let doc = Document::json(&manifest)?;
    atomic_write(path, &doc.bytes)
}
