//! Per-sample difficulty metrics over mask and probability volumes.
//!
//! All sums run over voxels in storage order and accumulate in `f64`, so
//! results are bit-reproducible for a given input.

use crate::error::{Error, Result};
use crate::volume::{MaskVolume, ProbabilityVolume, SaliencyStack};

/// Dice overlap `2|P ∩ T| / (|P| + |T|)`.
///
/// Two empty masks agree perfectly and score 1.0; one empty mask against a
/// non-empty one scores 0.0.
pub fn dice(pred: &MaskVolume, truth: &MaskVolume) -> Result<f64> {
    pred.dims().ensure_same(&truth.dims())?;
    let (mut both, mut p, mut t) = (0u64, 0u64, 0u64);
    for (&a, &b) in pred.data().iter().zip(truth.data()) {
        both += (a & b) as u64;
        p += a as u64;
        t += b as u64;
    }
    if p + t == 0 {
        return Ok(1.0);
    }
    Ok(2.0 * both as f64 / (p + t) as f64)
}

/// Dice of a probability map after thresholding at 0.5 (ties foreground).
pub fn soft_dice_thresholded(pred: &ProbabilityVolume, truth: &MaskVolume) -> Result<f64> {
    dice(&pred.threshold(), truth)
}

fn rms<I: Iterator<Item = f64>>(diffs: I) -> f64 {
    let (mut sum, mut count) = (0.0f64, 0usize);
    for d in diffs {
        sum += d * d;
        count += 1;
    }
    if count == 0 {
        return 0.0;
    }
    sum.sqrt() / (count as f64).sqrt()
}

fn voxel_errors<'a>(
    pred: &'a ProbabilityVolume,
    truth: &'a MaskVolume,
) -> impl Iterator<Item = (f64, bool)> + 'a {
    pred.data()
        .iter()
        .zip(truth.data())
        .map(|(&p, &t)| (p as f64 - t as f64, t == 1))
}

/// Whole-volume L2 error between prediction and label, normalized by the
/// square root of the voxel count.
///
/// This is the naive "average score" difficulty that background voxels
/// dominate on small targets; kept as a baseline.
pub fn naive_l2_score(pred: &ProbabilityVolume, truth: &MaskVolume) -> Result<f64> {
    pred.dims().ensure_same(&truth.dims())?;
    Ok(rms(voxel_errors(pred, truth).map(|(d, _)| d)))
}

/// EL2N: `‖p − y‖₂ / sqrt(N)` over every voxel.
pub fn el2n(pred: &ProbabilityVolume, truth: &MaskVolume) -> Result<f64> {
    pred.dims().ensure_same(&truth.dims())?;
    Ok(rms(voxel_errors(pred, truth).map(|(d, _)| d)))
}

/// EL2N restricted to foreground voxels of the label, normalized by the
/// square root of the foreground count. Background predictions never
/// affect it.
pub fn el2nx(pred: &ProbabilityVolume, truth: &MaskVolume) -> Result<f64> {
    pred.dims().ensure_same(&truth.dims())?;
    if truth.foreground_count() == 0 {
        return Err(Error::NoForeground);
    }
    Ok(rms(
        voxel_errors(pred, truth).filter_map(|(d, fg)| fg.then_some(d)),
    ))
}

/// Variance-of-saliency score: population variance of each voxel across
/// checkpoints, averaged over voxels.
///
/// The result is a raw per-sample value; normalize across the dataset
/// (see [`standardize`]) before ranking.
pub fn vog(saliency: &SaliencyStack) -> Result<f64> {
    let volumes = saliency.volumes();
    if volumes.len() < 2 {
        return Err(Error::InsufficientData(
            "saliency stack needs at least 2 volumes".into(),
        ));
    }
    let k = volumes.len() as f64;
    let voxels = saliency.dims().voxel_count();
    let mut total = 0.0f64;
    for i in 0..voxels {
        let mean = volumes.iter().map(|v| v.data()[i] as f64).sum::<f64>() / k;
        let var = volumes
            .iter()
            .map(|v| {
                let d = v.data()[i] as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / k;
        total += var;
    }
    Ok(total / voxels as f64)
}

/// Z-score a set of per-sample scores (population std). A constant input
/// maps to all zeros.
pub fn standardize(scores: &[f64]) -> Vec<f64> {
    if scores.is_empty() {
        return Vec::new();
    }
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let std = (scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n).sqrt();
    if std == 0.0 {
        return vec![0.0; scores.len()];
    }
    scores.iter().map(|s| (s - mean) / std).collect()
}
