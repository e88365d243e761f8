//! Brute-force reference implementations and random volume generators.
//!
//! The oracles walk voxels by (x, y, z) coordinates and sum directly; they
//! share no code with the library's metric routines.

#![allow(dead_code)]

use dadprune::volume::{Dims, MaskVolume, ProbabilityVolume, RealVolume, SaliencyStack};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

fn at(dims: &Dims, x: u32, y: u32, z: u32) -> usize {
    ((x * dims.height + y) * dims.depth + z) as usize
}

fn coords(dims: Dims) -> impl Iterator<Item = (u32, u32, u32)> {
    (0..dims.width).flat_map(move |x| {
        (0..dims.height).flat_map(move |y| (0..dims.depth).map(move |z| (x, y, z)))
    })
}

pub fn oracle_dice(pred: &MaskVolume, truth: &MaskVolume) -> f64 {
    let dims = truth.dims();
    let (mut inter, mut p, mut t) = (0.0, 0.0, 0.0);
    for (x, y, z) in coords(dims) {
        let i = at(&dims, x, y, z);
        let a = pred.data()[i] as f64;
        let b = truth.data()[i] as f64;
        inter += a * b;
        p += a;
        t += b;
    }
    if p + t == 0.0 {
        1.0
    } else {
        2.0 * inter / (p + t)
    }
}

/// sqrt(mean squared error) over voxels selected by `keep`.
fn oracle_rms(
    pred: &ProbabilityVolume,
    truth: &MaskVolume,
    keep: impl Fn(u8) -> bool,
) -> f64 {
    let dims = truth.dims();
    let (mut sq, mut n) = (0.0f64, 0.0f64);
    for (x, y, z) in coords(dims) {
        let i = at(&dims, x, y, z);
        if keep(truth.data()[i]) {
            let d = pred.data()[i] as f64 - truth.data()[i] as f64;
            sq += d * d;
            n += 1.0;
        }
    }
    (sq / n).sqrt()
}

pub fn oracle_el2n(pred: &ProbabilityVolume, truth: &MaskVolume) -> f64 {
    oracle_rms(pred, truth, |_| true)
}

pub fn oracle_el2nx(pred: &ProbabilityVolume, truth: &MaskVolume) -> f64 {
    oracle_rms(pred, truth, |t| t == 1)
}

/// Per-voxel variance as E[x²] − E[x]², averaged over voxels.
pub fn oracle_vog(stack: &SaliencyStack) -> f64 {
    let dims = stack.dims();
    let k = stack.volumes().len() as f64;
    let mut total = 0.0;
    let mut n = 0.0;
    for (x, y, z) in coords(dims) {
        let i = at(&dims, x, y, z);
        let (mut s, mut s2) = (0.0f64, 0.0f64);
        for v in stack.volumes() {
            let val = v.data()[i] as f64;
            s += val;
            s2 += val * val;
        }
        total += s2 / k - (s / k) * (s / k);
        n += 1.0;
    }
    total / n
}

pub fn random_dims(rng: &mut ChaCha8Rng, max: u32) -> Dims {
    if rng.random_bool(0.2) {
        Dims::planar(rng.random_range(1..=max), rng.random_range(1..=max)).unwrap()
    } else {
        Dims::new(
            rng.random_range(1..=max),
            rng.random_range(1..=max),
            rng.random_range(1..=max),
        )
        .unwrap()
    }
}

/// Mask with a random foreground fraction and at least one foreground voxel.
pub fn random_mask(rng: &mut ChaCha8Rng, dims: Dims) -> MaskVolume {
    let frac: f64 = rng.random_range(0.01..0.6);
    let mut data: Vec<u8> = (0..dims.voxel_count())
        .map(|_| rng.random_bool(frac) as u8)
        .collect();
    let i = rng.random_range(0..data.len());
    data[i] = 1;
    MaskVolume::new(dims, data).unwrap()
}

pub fn random_probs(rng: &mut ChaCha8Rng, dims: Dims) -> ProbabilityVolume {
    let data = (0..dims.voxel_count())
        .map(|_| rng.random_range(0.0f32..=1.0))
        .collect();
    ProbabilityVolume::new(dims, data).unwrap()
}

pub fn random_stack(rng: &mut ChaCha8Rng, dims: Dims) -> SaliencyStack {
    let k = rng.random_range(2..=4);
    let volumes = (0..k)
        .map(|_| {
            let data = (0..dims.voxel_count())
                .map(|_| rng.random_range(-1.0f32..=1.0))
                .collect();
            RealVolume::new(dims, data).unwrap()
        })
        .collect();
    SaliencyStack::new((0..k as u32).map(|e| e * 10).collect(), volumes).unwrap()
}
