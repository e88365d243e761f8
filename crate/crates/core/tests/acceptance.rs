//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use dadprune::dynamics::{
    full_horizon_dad, scan_stability, snapshot, subset_overlap, DadWindow, DistanceMode,
    DynamicsSnapshot, TrajectoryStore,
};
use dadprune::io::ddt1::{decode, encode_f32, encode_mask};
use dadprune::io::manifest::encode_manifest;
use dadprune::io::ingest_reader;
use dadprune::metrics::{dice, el2n, el2nx, naive_l2_score, vog};
use dadprune::pruning::{kept_size, prune, rank, rank_snapshot, Strategy};
use dadprune::sim::{planted_ensemble, simulate_trajectories, SimConfig};
use dadprune::stats::spearman;
use dadprune::volume::{Dims, MaskVolume, ProbabilityVolume};
use dadprune::{Error, FormatError};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.1?}, limit {limit:?}"))
}

fn spread(values: impl IntoIterator<Item = f64>) -> f64 {
    let (lo, hi) = values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi - lo
}

fn store(specs: &[dadprune::sim::SimSampleSpec], epochs: u32, seed: u64) -> TrajectoryStore {
    TrajectoryStore::from_records(simulate_trajectories(specs, epochs, seed).unwrap())
        .unwrap()
        .0
}

fn metric_oracles() -> Outcome {
    const REL: f64 = 1e-9;
    let start = Instant::now();
    let mut r = rng(0x0a11_ce5);
    let mut worst = 0.0f64;
    let mut voxels = 0;
    for case in 0..200 {
        let dims = random_dims(&mut r, 32);
        voxels += dims.voxel_count();
        let truth = random_mask(&mut r, dims);
        let probs = random_probs(&mut r, dims);
        let pred = probs.threshold();
        let stack = random_stack(&mut r, dims);
        let checks = [
            ("dice", dice(&pred, &truth).unwrap(), oracle_dice(&pred, &truth)),
            ("el2n", el2n(&probs, &truth).unwrap(), oracle_el2n(&probs, &truth)),
            ("naive_l2_score", naive_l2_score(&probs, &truth).unwrap(), oracle_el2n(&probs, &truth)),
            ("el2nx", el2nx(&probs, &truth).unwrap(), oracle_el2nx(&probs, &truth)),
            ("vog", vog(&stack).unwrap(), oracle_vog(&stack)),
        ];
        for (name, got, want) in checks {
            let rel = if got == want { 0.0 } else { (got - want).abs() / got.abs().max(want.abs()) };
            worst = worst.max(rel);
            ensure(close(got, want, REL), || {
                format!("case {case} ({dims}): {name} = {got:e}, oracle {want:e}")
            })?;
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("200 volumes, {voxels} voxels, worst relative error {worst:.1e}"))
}

/// Mask with at least one foreground and one background voxel.
fn mixed_mask(r: &mut rand_chacha::ChaCha8Rng, dims: Dims) -> MaskVolume {
    let mut data = random_mask(r, dims).data().to_vec();
    if data.iter().all(|&v| v == 1) {
        let i = r.random_range(0..data.len());
        data[i] = 0;
    }
    MaskVolume::new(dims, data).unwrap()
}

fn foreground_focus() -> Outcome {
    let mut r = rng(0xf0c5);
    let mut min_rise = f64::INFINITY;
    let mut min_drop = f64::INFINITY;
    for case in 0..100 {
        let dims = loop {
            let d = random_dims(&mut r, 16);
            if d.voxel_count() >= 2 {
                break d;
            }
        };
        let truth = mixed_mask(&mut r, dims);
        let probs = random_probs(&mut r, dims);

        let delta: f32 = r.random_range(0.05..0.9);
        let perturbed: Vec<f32> = probs
            .data()
            .iter()
            .zip(truth.data())
            .map(|(&p, &t)| if t == 0 { p + delta * (1.0 - p) } else { p })
            .collect();
        let perturbed = ProbabilityVolume::new(dims, perturbed).unwrap();
        let (x0, x1) = (el2nx(&probs, &truth).unwrap(), el2nx(&perturbed, &truth).unwrap());
        ensure(x0.to_bits() == x1.to_bits(), || format!("case {case}: el2nx moved {x0} -> {x1}"))?;
        let (e0, e1) = (el2n(&probs, &truth).unwrap(), el2n(&perturbed, &truth).unwrap());
        ensure(e1 > e0, || format!("case {case}: el2n did not change ({e0} -> {e1})"))?;
        min_rise = min_rise.min(e1 - e0);

        let plane = (dims.height * dims.depth) as usize;
        let extra = 1000usize.div_ceil(plane) as u32;
        let grown = if dims.is_planar() {
            Dims::planar(dims.width + extra, dims.height)
        } else {
            Dims::new(dims.width + extra, dims.height, dims.depth)
        }
        .unwrap();
        let mut t = truth.data().to_vec();
        let mut p = probs.data().to_vec();
        t.resize(grown.voxel_count(), 0);
        p.resize(grown.voxel_count(), 0.0);
        let (t, p) = (MaskVolume::new(grown, t).unwrap(), ProbabilityVolume::new(grown, p).unwrap());
        ensure(e0 > 0.0, || format!("case {case}: prediction unexpectedly perfect"))?;
        let e2 = el2n(&p, &t).unwrap();
        ensure(e2 < e0, || format!("case {case}: appending background gave {e0} -> {e2}"))?;
        ensure(el2nx(&p, &t).unwrap().to_bits() == x0.to_bits(), || {
            format!("case {case}: el2nx moved after appending background")
        })?;
        min_drop = min_drop.min(e0 - e2);
    }
    Ok(format!(
        "100 pairs; el2nx bit-identical; smallest el2n rise {min_rise:.2e}, smallest drop after padding {min_drop:.2e}"
    ))
}

fn late_window_collapse() -> Outcome {
    let cfg = SimConfig {
        plateau: Some(1.0),
        ..SimConfig::default()
    };
    let specs = planted_ensemble(100, &cfg, 3);
    let s = store(&specs, 1000, 3);
    let w = DadWindow::default();
    let mus = |snap: DynamicsSnapshot| snap.points.into_iter().map(|p| p.mu);
    let late = spread(mus(snapshot(&s, 1000, w).unwrap()));
    let mid = spread(mus(snapshot(&s, 50, w).unwrap()));
    ensure(late < 0.05, || format!("final-window spread {late:.4} >= 0.05"))?;
    ensure(mid > 0.2, || format!("mid-training spread {mid:.4} <= 0.2"))?;
    let horizon = |h: u32| spread(s.sample_ids().map(|id| full_horizon_dad(&s, id, h).unwrap()));
    let (short, long) = (horizon(100), horizon(1000));
    ensure(long < short, || format!("full-horizon spread {short:.4} -> {long:.4} did not shrink"))?;
    Ok(format!(
        "n=100, eta=0.02: final-window spread {late:.4}, mid (t=50) {mid:.4}; full-horizon {short:.4} (h=100) -> {long:.4} (h=1000)"
    ))
}

fn planted_order() -> Outcome {
    let start = Instant::now();
    let cfg = SimConfig::default();
    let mut worst = f64::INFINITY;
    for seed in 0..20 {
        let specs = planted_ensemble(100, &cfg, seed);
        let s = store(&specs, 60, seed);
        let snap = snapshot(&s, 50, DadWindow::default()).unwrap();
        let mu: Vec<f64> = snap.points.iter().map(|p| p.mu).collect();
        let ease: Vec<f64> = snap
            .points
            .iter()
            .map(|p| -specs.iter().find(|sp| sp.sample_id == p.sample_id).unwrap().difficulty)
            .collect();
        let rho = spearman(&mu, &ease).unwrap();
        ensure(rho >= 0.9, || format!("seed {seed}: spearman {rho:.4}"))?;
        worst = worst.min(rho);
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("n=100, eta=0.02, t=50, 20 seeds: min spearman {worst:.4}"))
}

fn stop_rule() -> Outcome {
    let cfg = SimConfig {
        noise: 0.001,
        onset_jitter: 40,
        ..SimConfig::default()
    };
    let w = DadWindow::default();
    let mut summary = Vec::new();
    for seed in 0..10 {
        let specs = planted_ensemble(100, &cfg, seed);
        let s = store(&specs, 1000, seed);
        let scan = scan_stability(&s, w, None, DistanceMode::Absolute).unwrap();
        let (peak, _) = scan.peak().unwrap();
        let stop = scan.stop_epoch.ok_or_else(|| format!("seed {seed}: stop rule never fired"))?;
        ensure(stop > peak, || format!("seed {seed}: stop {stop} not after peak {peak}"))?;
        let hardest = |t: u32| {
            prune(&rank_snapshot(&snapshot(&s, t, w).unwrap()).unwrap(), Strategy::Hard, 0.6, None)
                .unwrap()
                .kept
        };
        let last = hardest(1000);
        let at_stop = subset_overlap(&hardest(stop), &last).unwrap();
        let early = subset_overlap(&hardest(stop / 4), &last).unwrap();
        ensure(at_stop >= 0.9, || format!("seed {seed}: overlap at stop {at_stop:.3}"))?;
        ensure(early < at_stop, || {
            format!("seed {seed}: overlap at stop/4 {early:.3} not below {at_stop:.3}")
        })?;
        summary.push(format!("{peak}/{stop}: {early:.2}<{at_stop:.2}"));
    }
    Ok(format!(
        "10 seeds, hardest 40%, peak/stop: overlap(stop/4)<overlap(stop) vs final = [{}]",
        summary.join(", ")
    ))
}

fn pruning_arithmetic() -> Outcome {
    let start = Instant::now();
    let mut r = rng(0xa217);
    let mut checked = 0;
    for n in [7usize, 10, 80, 100] {
        let mut values: Vec<f64> = (0..n).map(|i| i as f64 * 0.37 - 5.0).collect();
        for i in (1..n).rev() {
            values.swap(i, r.random_range(0..=i));
        }
        let ids = |v: &[f64]| -> Vec<(String, f64)> {
            v.iter().enumerate().map(|(i, &s)| (format!("n{i:03}"), s)).collect()
        };
        let base = rank(ids(&values), "dad", None).unwrap();
        let neg = rank(ids(&values.iter().map(|v| -v).collect::<Vec<_>>()), "dad", None).unwrap();
        let transforms: [fn(f64) -> f64; 3] = [|v| 3.0 * v + 1.0, |v| v.powi(3), |v| v.exp()];
        let transformed: Vec<_> = transforms
            .iter()
            .map(|f| rank(ids(&values.iter().map(|&v| f(v)).collect::<Vec<_>>()), "dad", None).unwrap())
            .collect();
        for k in 1..=8 {
            let p = k as f64 / 10.0;
            let expected = (2 * (10 - k) * n + 10) / 20;
            ensure(kept_size(n, p) == expected, || format!("n={n} p={p}: kept {} != {expected}", kept_size(n, p)))?;
            let sorted = |m: dadprune::pruning::PruneManifest| {
                let mut v = m.kept;
                v.sort();
                v
            };
            for s in [Strategy::Ambiguous, Strategy::Easy, Strategy::Hard] {
                let kept = sorted(prune(&base, s, p, None).unwrap());
                ensure(kept.len() == expected, || format!("n={n} p={p} {s}: size {}", kept.len()))?;
                for (t, rt) in transformed.iter().enumerate() {
                    ensure(sorted(prune(rt, s, p, None).unwrap()) == kept, || {
                        format!("n={n} p={p} {s}: transform {t} changed the subset")
                    })?;
                }
                checked += 1;
            }
            let easy = sorted(prune(&base, Strategy::Easy, p, None).unwrap());
            let hard_neg = sorted(prune(&neg, Strategy::Hard, p, None).unwrap());
            ensure(easy == hard_neg, || format!("n={n} p={p}: easy != hard on negated scores"))?;
            let hard = sorted(prune(&base, Strategy::Hard, p, None).unwrap());
            let easy_neg = sorted(prune(&neg, Strategy::Easy, p, None).unwrap());
            ensure(hard == easy_neg, || format!("n={n} p={p}: hard != easy on negated scores"))?;
            let random = prune(&base, Strategy::Random, p, Some(1)).unwrap();
            ensure(random.kept.len() == expected, || format!("n={n} p={p}: random size"))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{checked} (n, p, strategy) cases under 3 monotone transforms and negation"))
}

fn format_goldens() -> Outcome {
    let golden = |text: &str| hex::decode(text.trim()).unwrap();
    let mask_ones = golden(include_str!("golden/mask_2x2x2_ones.hex"));
    let prob = golden(include_str!("golden/prob_2x2.hex"));
    let mask_xyz = golden(include_str!("golden/mask_3x1x2.hex"));

    let ones = MaskVolume::filled(Dims::new(2, 2, 2).unwrap(), true);
    ensure(encode_mask(&ones) == mask_ones, || "2x2x2 mask bytes differ".into())?;
    let planar = Dims::planar(2, 2).unwrap();
    ensure(encode_f32(&planar, &[0.0, 0.25, 0.5, 1.0]) == prob, || "planar f32 bytes differ".into())?;
    let m = MaskVolume::from_fn(Dims::new(3, 1, 2).unwrap(), |x, _, z| (x, z) == (1, 1) || (x, z) == (2, 0));
    ensure(encode_mask(&m) == mask_xyz, || "axis order differs".into())?;

    let r = rank((0..10).map(|i| (format!("s{i}"), i as f64)), "dad", Some(40)).unwrap();
    let amb = encode_manifest(&prune(&r, Strategy::Ambiguous, 0.4, None).unwrap());
    ensure(amb == include_bytes!("golden/manifest_ambiguous.json"), || "ambiguous manifest differs".into())?;
    let r = rank([("a", 0.0), ("b", 1.0)], "el2n", None).unwrap();
    let mut rnd = prune(&r, Strategy::Random, 0.5, Some(7)).unwrap();
    let golden_rnd: &[u8] = include_bytes!("golden/manifest_random.json");
    let parsed = dadprune::io::manifest::decode_manifest(golden_rnd).unwrap();
    rnd.kept = parsed.kept;
    rnd.dropped = parsed.dropped;
    ensure(encode_manifest(&rnd) == golden_rnd, || "random manifest differs".into())?;

    let with = |f: &dyn Fn(&mut Vec<u8>)| {
        let mut b = mask_ones.clone();
        f(&mut b);
        decode(&b).err()
    };
    let mut dims_overflow = mask_ones[..18].to_vec();
    for off in [6, 10, 14] {
        dims_overflow[off..off + 4].copy_from_slice(&u32::MAX.to_le_bytes());
    }
    let mut bad_prob = prob.clone();
    bad_prob[22..26].copy_from_slice(&2.0f32.to_le_bytes());
    let volume_cases: Vec<(&str, Option<FormatError>, FormatError)> = vec![
        ("bad magic", with(&|b| b[0] = b'X'), FormatError::BadMagic { found: b"XDT1".to_vec() }),
        ("unknown dtype", with(&|b| b[4] = 9), FormatError::UnknownDtype(9)),
        ("bad ndim", with(&|b| b[5] = 1), FormatError::BadNdim(1)),
        ("zero dim", with(&|b| b[14..18].fill(0)), FormatError::ZeroDim { offset: 14 }),
        ("truncated header", decode(&mask_ones[..12]).err(), FormatError::TruncatedHeader { needed: 18, available: 12 }),
        ("dims overflow", decode(&dims_overflow).err(), FormatError::DimsOverflow),
        ("truncated payload", with(&|b| b.truncate(20)), FormatError::TruncatedPayload { offset: 18, expected: 8, found: 2 }),
        ("trailing bytes", with(&|b| b.push(0)), FormatError::TrailingBytes { offset: 26, extra: 1 }),
        ("mask byte", with(&|b| b[25] = 0xff), FormatError::BadMaskByte { offset: 25, value: 0xff }),
        ("probability", decode(&bad_prob).err(), FormatError::BadProbability { offset: 22, value: 2.0 }),
    ];
    for (name, got, want) in &volume_cases {
        ensure(got.as_ref() == Some(want), || format!("{name}: got {got:?}, want {want:?}"))?;
    }

    let stream_err = |text: &str| match ingest_reader(text.as_bytes()) {
        Err(Error::Format(e)) => Some(e),
        _ => None,
    };
    let ok_line = "{\"sample_id\":\"a\",\"epoch\":1,\"dice\":0.5}\n";
    ensure(
        matches!(stream_err(&format!("{ok_line}{{oops\n")), Some(FormatError::BadLine { line: 2, .. })),
        || "malformed line".into(),
    )?;
    ensure(
        matches!(
            stream_err("{\"sample_id\":\"a\",\"epoch\":1,\"dice\":1.01}\n"),
            Some(FormatError::DiceOutOfRange { line: 1, .. })
        ),
        || "dice out of range".into(),
    )?;
    ensure(
        matches!(
            stream_err(&format!("{ok_line}{ok_line}")),
            Some(FormatError::DuplicateRecord { first_line: 1, second_line: 2, .. })
        ),
        || "duplicate record".into(),
    )?;
    let (kept, warnings) = ingest_reader(format!("{ok_line}{{\"sample_id\":\"b\"").as_bytes()).unwrap();
    ensure(kept.sample_count() == 1 && warnings.len() == 1, || "truncated final line".into())?;

    Ok(format!(
        "3 volume + 2 manifest goldens; {} volume and 4 stream corruption classes",
        volume_cases.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("metric oracle equivalence", metric_oracles),
        ("foreground focus", foreground_focus),
        ("late-window collapse", late_window_collapse),
        ("planted-order recovery", planted_order),
        ("stop-rule fidelity", stop_rule),
        ("pruning arithmetic", pruning_arithmetic),
        ("format goldens", format_goldens),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check)
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {name:<26} [{elapsed:>8.2?}]  {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<26} [{elapsed:>8.2?}]  {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
