//! Synthetic training dynamics with planted difficulty.
//!
//! Each sample follows a saturating exponential learning curve that starts
//! at its onset epoch:
//!
//! ```text
//! dice(e) = clamp(0.1 + η·ξ)                          e < onset
//! dice(e) = clamp(a·(1 − exp(−(e − onset)/τ)) + η·ξ)  e ≥ onset
//! ```
//!
//! with plateau `a = 1 − 0.3·d`, time constant `τ = τ₀·(1 + 4d)` and `ξ`
//! standard Gaussian. Clamping biases noisy values near 0 and 1 slightly;
//! this is negligible for `η ≤ 0.05`.
//!
//! Randomness is drawn from a per-sample ChaCha stream derived from
//! `(seed, sample_id)`, so samples can be generated independently and the
//! output does not depend on the order of `specs`.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dynamics::ScoreRecord;
use crate::error::{Error, Result};
use crate::metrics::dice;
use crate::volume::{Dims, MaskVolume, ProbabilityVolume};

/// Dice level of the pre-onset phase.
pub const PRE_ONSET_LEVEL: f64 = 0.1;

/// Calibration stops once the emitted volume is this close to its target.
pub const CALIBRATION_TOLERANCE: f64 = 0.01;
/// Emitted volumes are rejected if they miss the target by more than this.
pub const CALIBRATION_LIMIT: f64 = 0.05;
pub const CALIBRATION_MAX_ITERS: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct SimSampleSpec {
    pub sample_id: String,
    /// Planted difficulty in `[0, 1]`; 0 is easiest.
    pub difficulty: f64,
    /// Asymptotic Dice.
    pub plateau: f64,
    /// Time constant in epochs.
    pub tau: f64,
    /// Gaussian noise amplitude `η`.
    pub noise: f64,
    /// First epoch of the learning phase.
    pub onset: u32,
}

/// Shared knobs for building spec ensembles.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub tau0: f64,
    pub noise: f64,
    pub onset: u32,
    /// Per-sample onset is `onset + U{0..=onset_jitter}`.
    pub onset_jitter: u32,
    /// Replace the difficulty-dependent plateau, e.g. 1.0 to model every
    /// sample eventually being fit perfectly.
    pub plateau: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            tau0: 20.0,
            noise: 0.02,
            onset: 5,
            onset_jitter: 0,
            plateau: None,
        }
    }
}

impl SimSampleSpec {
    pub fn new(sample_id: impl Into<String>, difficulty: f64, config: &SimConfig) -> Self {
        SimSampleSpec {
            sample_id: sample_id.into(),
            difficulty,
            plateau: config.plateau.unwrap_or(1.0 - 0.3 * difficulty),
            tau: config.tau0 * (1.0 + 4.0 * difficulty),
            noise: config.noise,
            onset: config.onset,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name, value: f64, ok: bool, range| {
            if ok {
                Ok(())
            } else {
                Err(Error::OutOfRange { name, value, range })
            }
        };
        check(
            "difficulty",
            self.difficulty,
            (0.0..=1.0).contains(&self.difficulty),
            "[0, 1]",
        )?;
        check(
            "plateau",
            self.plateau,
            (0.0..=1.0).contains(&self.plateau),
            "[0, 1]",
        )?;
        check("tau", self.tau, self.tau.is_finite() && self.tau > 0.0, "(0, inf)")?;
        check(
            "noise",
            self.noise,
            self.noise.is_finite() && self.noise >= 0.0,
            "[0, inf)",
        )
    }

    /// Noise-free curve value at `epoch`.
    pub fn expected(&self, epoch: u32) -> f64 {
        if epoch < self.onset {
            PRE_ONSET_LEVEL
        } else {
            let s = (epoch - self.onset) as f64;
            self.plateau * (1.0 - (-s / self.tau).exp())
        }
    }
}

/// `n` samples with evenly spaced difficulties `i / (n − 1)`, ids `s000`,
/// `s001`, …. Onset jitter (if any) is drawn from `seed`.
pub fn planted_ensemble(n: usize, config: &SimConfig, seed: u64) -> Vec<SimSampleSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0e5e_4b1e);
    let width = (n.max(1) - 1).to_string().len().max(3);
    (0..n)
        .map(|i| {
            let d = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
            let mut spec = SimSampleSpec::new(format!("s{i:0width$}"), d, config);
            if config.onset_jitter > 0 {
                spec.onset += rng.random_range(0..=config.onset_jitter);
            }
            spec
        })
        .collect()
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Independent generator for one sample.
pub fn sample_rng(seed: u64, sample_id: &str, salt: u64) -> ChaCha8Rng {
    let mut z = seed ^ fnv1a(sample_id.as_bytes()).rotate_left(17) ^ salt;
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// Dice values for epochs `1..=epochs`.
pub fn trajectory(spec: &SimSampleSpec, epochs: u32, seed: u64) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = sample_rng(seed, &spec.sample_id, 0);
    Ok((1..=epochs)
        .map(|e| {
            let xi: f64 = rng.sample(StandardNormal);
            (spec.expected(e) + spec.noise * xi).clamp(0.0, 1.0)
        })
        .collect())
}

/// Score records for epochs `1..=epochs`, ordered by epoch then by the
/// order of `specs`.
pub fn simulate_trajectories(
    specs: &[SimSampleSpec],
    epochs: u32,
    seed: u64,
) -> Result<Vec<ScoreRecord>> {
    if specs.is_empty() {
        return Err(Error::Empty("simulation specs"));
    }
    if epochs == 0 {
        return Err(Error::OutOfRange {
            name: "epochs",
            value: 0.0,
            range: ">= 1",
        });
    }
    let mut ids = BTreeSet::new();
    for s in specs {
        if !ids.insert(s.sample_id.as_str()) {
            return Err(Error::DuplicateSample(s.sample_id.clone()));
        }
    }
    let curves = specs
        .iter()
        .map(|s| trajectory(s, epochs, seed))
        .collect::<Result<Vec<_>>>()?;
    let mut records = Vec::with_capacity(specs.len() * epochs as usize);
    for e in 0..epochs as usize {
        for (spec, curve) in specs.iter().zip(&curves) {
            records.push(ScoreRecord::new(spec.sample_id.clone(), e as u32 + 1, curve[e]));
        }
    }
    Ok(records)
}

/// Solid ball of radius `radius` voxels centred in `dims`.
pub fn ball(dims: Dims, radius: f64) -> MaskVolume {
    let centre = |n: u32| (n as f64 - 1.0) / 2.0;
    let (cx, cy, cz) = (centre(dims.width), centre(dims.height), centre(dims.depth));
    MaskVolume::from_fn(dims, |x, y, z| {
        let (dx, dy, dz) = (x as f64 - cx, y as f64 - cy, z as f64 - cz);
        dx * dx + dy * dy + dz * dz <= radius * radius
    })
}

/// One emitted prediction and the curve value it was calibrated to.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskFrame {
    pub epoch: u32,
    pub target: f64,
    pub achieved: f64,
    pub prediction: ProbabilityVolume,
}

/// Voxels in the order they get corrupted: boundary erosion and dilation
/// first (interleaved), then salt noise over everything else.
fn corruption_order(truth: &MaskVolume, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let dims = truth.dims();
    let mut erode = Vec::new();
    let mut dilate = Vec::new();
    let mut rest = Vec::new();
    for i in 0..dims.voxel_count() {
        let fg = truth.get(i);
        let on_boundary = dims.neighbours(i).any(|n| truth.get(n) != fg);
        match (fg, on_boundary) {
            (true, true) => erode.push(i),
            (false, true) => dilate.push(i),
            _ => rest.push(i),
        }
    }
    erode.shuffle(rng);
    dilate.shuffle(rng);
    rest.shuffle(rng);
    let mut order = Vec::with_capacity(dims.voxel_count());
    let (mut a, mut b) = (erode.into_iter(), dilate.into_iter());
    loop {
        match (a.next(), b.next()) {
            (None, None) => break,
            (x, y) => order.extend(x.into_iter().chain(y)),
        }
    }
    order.extend(rest);
    order
}

fn corrupt(truth: &MaskVolume, order: &[usize], flips: usize) -> MaskVolume {
    let mut data = truth.data().to_vec();
    for &i in &order[..flips] {
        data[i] ^= 1;
    }
    MaskVolume::new(truth.dims(), data).expect("flipping keeps a valid mask")
}

/// Each flip turns a correct voxel into a wrong one, so Dice falls strictly
/// as `flips` grows; bisect the flip count on the strength scale `[0, 1]`.
fn calibrate(truth: &MaskVolume, order: &[usize], target: f64) -> Result<(MaskVolume, f64)> {
    let total = order.len();
    let eval = |strength: f64| -> Result<(MaskVolume, f64)> {
        let flips = (strength * total as f64).round() as usize;
        let m = corrupt(truth, order, flips.min(total));
        let d = dice(&m, truth)?;
        Ok((m, d))
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut best = eval(0.0)?;
    if (best.1 - target).abs() <= CALIBRATION_TOLERANCE {
        return Ok(best);
    }
    for _ in 0..CALIBRATION_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        let (m, d) = eval(mid)?;
        if (d - target).abs() < (best.1 - target).abs() {
            best = (m, d);
        }
        if (d - target).abs() <= CALIBRATION_TOLERANCE {
            break;
        }
        if d > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (best.1 - target).abs() > CALIBRATION_LIMIT {
        return Err(Error::Calibration {
            target,
            closest: best.1,
        });
    }
    Ok(best)
}

/// Per-epoch predictions whose Dice against `truth` follows the sample's
/// simulated curve. Predictions are hard 0/1 probability maps.
pub fn simulate_mask_sequence(
    truth: &MaskVolume,
    spec: &SimSampleSpec,
    epochs: u32,
    seed: u64,
) -> Result<Vec<MaskFrame>> {
    if truth.foreground_count() == 0 {
        return Err(Error::NoForeground);
    }
    let targets = trajectory(spec, epochs, seed)?;
    let mut rng = sample_rng(seed, &spec.sample_id, 0x6d61_736b);
    let order = corruption_order(truth, &mut rng);
    targets
        .iter()
        .enumerate()
        .map(|(i, &target)| {
            let (mask, achieved) = calibrate(truth, &order, target)?;
            Ok(MaskFrame {
                epoch: i as u32 + 1,
                target,
                achieved,
                prediction: mask.to_probabilities(),
            })
        })
        .collect()
}
