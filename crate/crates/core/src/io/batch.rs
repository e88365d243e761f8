//! Batch scoring of dumped prediction volumes against ground truth.
//!
//! Files are matched by name; the file stem is the sample id. Only files
//! with the `.ddt1` extension are considered.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::dynamics::ScoreRecord;
use crate::error::{Error, Result};
use crate::io::ddt1::{read_volume, Volume};
use crate::metrics::{dice, el2n, el2nx};

pub const VOLUME_EXTENSION: &str = "ddt1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScoreWarning {
    NoVolumes,
}

fn list_volumes(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == VOLUME_EXTENSION) {
            let name = path
                .file_name()
                .expect("files have names")
                .to_string_lossy()
                .into_owned();
            out.insert(name, path);
        }
    }
    Ok(out)
}

/// Score every prediction in `pred_dir` against the same-named mask in
/// `truth_dir`, in filename order.
///
/// Probability predictions are thresholded for Dice and additionally
/// produce `el2n` (and `el2nx` when the truth has foreground).
pub fn score_volumes(
    pred_dir: impl AsRef<Path>,
    truth_dir: impl AsRef<Path>,
    epoch: u32,
) -> Result<(Vec<ScoreRecord>, Vec<ScoreWarning>)> {
    let preds = list_volumes(pred_dir.as_ref())?;
    let truths = list_volumes(truth_dir.as_ref())?;
    if let Some(name) = preds.keys().find(|k| !truths.contains_key(*k)) {
        return Err(Error::UnmatchedFile(preds[name].clone()));
    }
    if let Some(name) = truths.keys().find(|k| !preds.contains_key(*k)) {
        return Err(Error::UnmatchedFile(truths[name].clone()));
    }
    if preds.is_empty() {
        return Ok((Vec::new(), vec![ScoreWarning::NoVolumes]));
    }
    let mut records = Vec::with_capacity(preds.len());
    for (name, pred_path) in &preds {
        let truth = match read_volume(&truths[name])? {
            Volume::Mask(m) => m,
            Volume::Probability(_) => {
                return Err(Error::InvalidVolume(format!(
                    "{}: ground truth must be a mask",
                    truths[name].display()
                )))
            }
        };
        let pred = read_volume(pred_path)?;
        let stem = pred_path
            .file_stem()
            .expect("files have stems")
            .to_string_lossy()
            .into_owned();
        let mut record = ScoreRecord::new(stem, epoch, dice(&pred.to_mask(), &truth)?);
        if let Volume::Probability(p) = &pred {
            record = record.with_metric("el2n", el2n(p, &truth)?);
            if truth.foreground_count() > 0 {
                record = record.with_metric("el2nx", el2nx(p, &truth)?);
            }
        }
        records.push(record);
    }
    Ok((records, Vec::new()))
}
