//! Prune manifests as pretty-printed JSON with a fixed key order:
//! `strategy`, `fraction_pruned`, `scoring_epoch`, `metric`, `seed` (random
//! strategy only), `engine_version`, `kept`, `dropped`. Two-space indent,
//! trailing newline.

use std::path::Path;

use crate::error::{Error, FormatError, Result};
use crate::pruning::PruneManifest;

pub fn encode_manifest(manifest: &PruneManifest) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(manifest).expect("manifest always serializes");
    out.push(b'\n');
    out
}

pub fn decode_manifest(bytes: &[u8]) -> Result<PruneManifest, FormatError> {
    let m: PruneManifest =
        serde_json::from_slice(bytes).map_err(|e| FormatError::Manifest(e.to_string()))?;
    if !(0.0..1.0).contains(&m.fraction_pruned) {
        return Err(FormatError::Manifest(format!(
            "fraction_pruned {} outside [0, 1)",
            m.fraction_pruned
        )));
    }
    let mut all: Vec<&str> = m.kept.iter().chain(&m.dropped).map(String::as_str).collect();
    all.sort_unstable();
    if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
        return Err(FormatError::Manifest(format!(
            "sample `{}` listed twice",
            w[0]
        )));
    }
    Ok(m)
}

pub fn write_manifest(path: impl AsRef<Path>, manifest: &PruneManifest) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_manifest(manifest)).map_err(|e| Error::io(path, e))
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<PruneManifest> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(decode_manifest(&bytes)?)
}
