//! Per-sample Dice trajectories and the statistics derived from them:
//! windowed average Dice (DAD), its variability, data-map snapshots, the
//! moving-distance curve and the 1%-of-peak stop rule.
//!
//! A window of length `Δt` ending at epoch `t` covers exactly the epochs
//! `t − Δt + 1 ..= t`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, FormatError, Result};

/// Fraction of the running maximum below which the moving distance signals
/// that rankings have settled.
pub const STOP_FRACTION: f64 = 0.01;

/// One (sample, epoch) observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub sample_id: String,
    pub epoch: u32,
    pub dice: f64,
    /// Additional per-sample metrics such as `el2n` or `el2nx`.
    #[serde(flatten)]
    pub extras: BTreeMap<String, f64>,
}

impl ScoreRecord {
    pub fn new(sample_id: impl Into<String>, epoch: u32, dice: f64) -> Self {
        ScoreRecord {
            sample_id: sample_id.into(),
            epoch,
            dice,
            extras: BTreeMap::new(),
        }
    }

    pub fn with_metric(mut self, name: impl Into<String>, value: f64) -> Self {
        self.extras.insert(name.into(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub dice: f64,
    pub extras: BTreeMap<String, f64>,
}

/// An epoch that some, but not all, known samples reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialEpoch {
    pub epoch: u32,
    pub present: usize,
    pub expected: usize,
}

/// Accumulates records; [`StoreBuilder::finish`] drops incomplete epochs.
#[derive(Debug, Default, Clone)]
pub struct StoreBuilder {
    records: BTreeMap<String, BTreeMap<u32, (Observation, usize)>>,
}

impl StoreBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert a record that came from `line` of some stream (use 0 when
    /// there is no line to cite).
    pub fn insert(&mut self, record: ScoreRecord, line: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&record.dice) {
            return Err(FormatError::DiceOutOfRange {
                line,
                value: record.dice,
            }
            .into());
        }
        let per_sample = self.records.entry(record.sample_id.clone()).or_default();
        if let Some((_, first_line)) = per_sample.get(&record.epoch) {
            return Err(FormatError::DuplicateRecord {
                sample: record.sample_id,
                epoch: record.epoch,
                first_line: *first_line,
                second_line: line,
            }
            .into());
        }
        per_sample.insert(
            record.epoch,
            (
                Observation {
                    dice: record.dice,
                    extras: record.extras,
                },
                line,
            ),
        );
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Finalize into a store containing only complete epochs, plus the list
    /// of epochs that were excluded.
    pub fn finish(self) -> (TrajectoryStore, Vec<PartialEpoch>) {
        let expected = self.records.len();
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for per_sample in self.records.values() {
            for &epoch in per_sample.keys() {
                *counts.entry(epoch).or_default() += 1;
            }
        }
        let partial: Vec<PartialEpoch> = counts
            .iter()
            .filter(|&(_, &c)| c < expected)
            .map(|(&epoch, &present)| PartialEpoch {
                epoch,
                present,
                expected,
            })
            .collect();
        let epochs: BTreeSet<u32> = counts
            .iter()
            .filter(|&(_, &c)| c == expected)
            .map(|(&e, _)| e)
            .collect();
        let samples = self
            .records
            .into_iter()
            .map(|(id, per_sample)| {
                let kept = per_sample
                    .into_iter()
                    .filter(|(e, _)| epochs.contains(e))
                    .map(|(e, (obs, _))| (e, obs))
                    .collect();
                (id, kept)
            })
            .collect();
        (TrajectoryStore { samples, epochs }, partial)
    }
}

/// All per-sample observations over complete epochs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryStore {
    samples: BTreeMap<String, BTreeMap<u32, Observation>>,
    epochs: BTreeSet<u32>,
}

impl TrajectoryStore {
    /// Build from in-memory records. Fails on duplicates or out-of-range
    /// dice; incomplete epochs are dropped and returned.
    pub fn from_records(
        records: impl IntoIterator<Item = ScoreRecord>,
    ) -> Result<(Self, Vec<PartialEpoch>)> {
        let mut builder = StoreBuilder::new();
        for r in records {
            builder.insert(r, 0)?;
        }
        Ok(builder.finish())
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    pub fn epoch_count(&self) -> usize {
        self.epochs.len()
    }

    pub fn epochs(&self) -> impl Iterator<Item = u32> + '_ {
        self.epochs.iter().copied()
    }

    pub fn first_epoch(&self) -> Option<u32> {
        self.epochs.first().copied()
    }

    pub fn last_epoch(&self) -> Option<u32> {
        self.epochs.last().copied()
    }

    pub fn sample_ids(&self) -> impl Iterator<Item = &str> {
        self.samples.keys().map(String::as_str)
    }

    pub fn trajectory(&self, sample_id: &str) -> Result<&BTreeMap<u32, Observation>> {
        self.samples
            .get(sample_id)
            .ok_or_else(|| Error::UnknownSample(sample_id.to_string()))
    }

    pub fn dice_at(&self, sample_id: &str, epoch: u32) -> Result<f64> {
        self.trajectory(sample_id)?
            .get(&epoch)
            .map(|o| o.dice)
            .ok_or_else(|| Error::IncompleteWindow {
                sample: sample_id.to_string(),
                missing: vec![epoch],
            })
    }

    /// Per-sample value of `metric` at `epoch`; `"dice"` reads the Dice
    /// column, anything else an extra metric.
    pub fn metric_at(&self, epoch: u32, metric: &str) -> Result<Vec<(String, f64)>> {
        self.samples
            .iter()
            .map(|(id, traj)| {
                let obs = traj.get(&epoch).ok_or_else(|| Error::IncompleteWindow {
                    sample: id.clone(),
                    missing: vec![epoch],
                })?;
                let value = if metric == "dice" {
                    Some(obs.dice)
                } else {
                    obs.extras.get(metric).copied()
                };
                value.map(|v| (id.clone(), v)).ok_or_else(|| {
                    Error::InsufficientData(format!(
                        "sample `{id}` has no `{metric}` at epoch {epoch}"
                    ))
                })
            })
            .collect()
    }

    fn window_values(&self, sample_id: &str, t: u32, window: DadWindow) -> Result<Vec<f64>> {
        let traj = self.trajectory(sample_id)?;
        let start = window_start(t, window)?;
        let mut values = Vec::with_capacity(window.delta_t as usize);
        let mut missing = Vec::new();
        for e in start..=t {
            match traj.get(&e) {
                Some(o) => values.push(o.dice),
                None => missing.push(e),
            }
        }
        if !missing.is_empty() {
            return Err(Error::IncompleteWindow {
                sample: sample_id.to_string(),
                missing,
            });
        }
        Ok(values)
    }
}

fn window_start(t: u32, window: DadWindow) -> Result<u32> {
    (t + 1)
        .checked_sub(window.delta_t)
        .ok_or(Error::WindowBeforeStart {
            epoch: t,
            delta_t: window.delta_t,
        })
}

/// Number of trailing epochs averaged into a DAD score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DadWindow {
    delta_t: u32,
}

impl DadWindow {
    pub const DEFAULT_LEN: u32 = 10;

    pub fn new(delta_t: u32) -> Result<Self> {
        if delta_t == 0 {
            return Err(Error::OutOfRange {
                name: "delta_t",
                value: 0.0,
                range: ">= 1",
            });
        }
        Ok(DadWindow { delta_t })
    }

    pub fn len(&self) -> u32 {
        self.delta_t
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Default for DadWindow {
    fn default() -> Self {
        DadWindow {
            delta_t: Self::DEFAULT_LEN,
        }
    }
}

fn mean(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    (values.iter().sum::<f64>() / values.len() as f64).clamp(lo, hi)
}

fn population_std(values: &[f64]) -> f64 {
    if values.windows(2).all(|w| w[0] == w[1]) {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Mean Dice over the `Δt` epochs ending at `t`.
pub fn dad_score(store: &TrajectoryStore, sample_id: &str, t: u32, window: DadWindow) -> Result<f64> {
    Ok(mean(&store.window_values(sample_id, t, window)?))
}

/// Mean Dice from the store's first epoch through `horizon`.
pub fn full_horizon_dad(store: &TrajectoryStore, sample_id: &str, horizon: u32) -> Result<f64> {
    let traj = store.trajectory(sample_id)?;
    let first = store
        .first_epoch()
        .ok_or(Error::Empty("trajectory store"))?;
    if horizon < first {
        return Err(Error::IncompleteWindow {
            sample: sample_id.to_string(),
            missing: vec![horizon],
        });
    }
    let mut values = Vec::new();
    let mut missing = Vec::new();
    for e in first..=horizon {
        match traj.get(&e) {
            Some(o) => values.push(o.dice),
            None => missing.push(e),
        }
    }
    if !missing.is_empty() {
        return Err(Error::IncompleteWindow {
            sample: sample_id.to_string(),
            missing,
        });
    }
    Ok(mean(&values))
}

/// Population standard deviation of Dice over the same window as
/// [`dad_score`].
pub fn variability(
    store: &TrajectoryStore,
    sample_id: &str,
    t: u32,
    window: DadWindow,
) -> Result<f64> {
    Ok(population_std(&store.window_values(sample_id, t, window)?))
}

/// A sample's data-map coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub sample_id: String,
    /// Windowed average Dice.
    pub mu: f64,
    /// Windowed Dice standard deviation.
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsSnapshot {
    pub epoch: u32,
    pub window: DadWindow,
    /// Sorted by sample id.
    pub points: Vec<SamplePoint>,
}

impl DynamicsSnapshot {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn scores(&self) -> impl Iterator<Item = (&str, f64)> {
        self.points.iter().map(|p| (p.sample_id.as_str(), p.mu))
    }
}

/// `(mu, sigma)` for every sample at epoch `t`.
pub fn snapshot(store: &TrajectoryStore, t: u32, window: DadWindow) -> Result<DynamicsSnapshot> {
    if store.sample_count() == 0 {
        return Err(Error::Empty("trajectory store"));
    }
    let points = store
        .samples
        .keys()
        .map(|id| {
            let values = store.window_values(id, t, window)?;
            Ok(SamplePoint {
                sample_id: id.clone(),
                mu: mean(&values),
                sigma: population_std(&values),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DynamicsSnapshot {
        epoch: t,
        window,
        points,
    })
}

/// How per-sample changes are combined into the moving distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMode {
    /// `Σ |Δμ| + |Δσ|`.
    #[default]
    Absolute,
    /// `Σ Δμ + Δσ`; opposite movements cancel and the result can be negative.
    Signed,
}

/// Moving distance between two snapshots over the same sample set.
pub fn moving_distance(prev: &DynamicsSnapshot, curr: &DynamicsSnapshot) -> Result<f64> {
    moving_distance_with(prev, curr, DistanceMode::Absolute)
}

pub fn moving_distance_with(
    prev: &DynamicsSnapshot,
    curr: &DynamicsSnapshot,
    mode: DistanceMode,
) -> Result<f64> {
    let before: BTreeMap<&str, &SamplePoint> = prev
        .points
        .iter()
        .map(|p| (p.sample_id.as_str(), p))
        .collect();
    let after: BTreeMap<&str, &SamplePoint> = curr
        .points
        .iter()
        .map(|p| (p.sample_id.as_str(), p))
        .collect();
    if before.len() != after.len() || before.keys().ne(after.keys()) {
        let a: BTreeSet<&str> = before.keys().copied().collect();
        let b: BTreeSet<&str> = after.keys().copied().collect();
        return Err(Error::SampleSetMismatch {
            only_in_first: a.difference(&b).map(|s| s.to_string()).collect(),
            only_in_second: b.difference(&a).map(|s| s.to_string()).collect(),
        });
    }
    let total = before
        .values()
        .zip(after.values())
        .map(|(p, c)| {
            let dm = c.mu - p.mu;
            let ds = c.sigma - p.sigma;
            match mode {
                DistanceMode::Absolute => dm.abs() + ds.abs(),
                DistanceMode::Signed => dm + ds,
            }
        })
        .sum();
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopDecision {
    pub stop: bool,
    pub l_max: f64,
    pub current: f64,
    /// `current / l_max`, or 0 when `l_max` is 0.
    pub ratio: f64,
}

/// Stop once the latest moving distance drops below 1% of the largest one
/// seen. A single observation never stops.
pub fn should_stop(history: &[f64]) -> Result<StopDecision> {
    let current = *history.last().ok_or(Error::Empty("moving-distance history"))?;
    let l_max = history.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let stop = history.len() >= 2 && current < STOP_FRACTION * l_max;
    let ratio = if l_max > 0.0 { current / l_max } else { 0.0 };
    Ok(StopDecision {
        stop,
        l_max,
        current,
        ratio,
    })
}

/// `|a ∩ b| / |a|` for two equal-size subsets.
pub fn subset_overlap<S: AsRef<str>>(a: &[S], b: &[S]) -> Result<f64> {
    let a: BTreeSet<&str> = a.iter().map(AsRef::as_ref).collect();
    let b: BTreeSet<&str> = b.iter().map(AsRef::as_ref).collect();
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("subset"));
    }
    if a.len() != b.len() {
        return Err(Error::SubsetSizeMismatch(a.len(), b.len()));
    }
    Ok(a.intersection(&b).count() as f64 / a.len() as f64)
}

/// Feeds snapshots one at a time and reports when the stop rule fires.
#[derive(Debug, Clone, Default)]
pub struct StopMonitor {
    mode: DistanceMode,
    prev: Option<DynamicsSnapshot>,
    curve: Vec<(u32, f64)>,
    stopped_at: Option<u32>,
}

impl StopMonitor {
    pub fn new(mode: DistanceMode) -> Self {
        StopMonitor {
            mode,
            ..Default::default()
        }
    }

    /// Returns `None` for the first snapshot (nothing to compare against).
    pub fn observe(&mut self, snapshot: DynamicsSnapshot) -> Result<Option<StopDecision>> {
        let Some(prev) = self.prev.replace(snapshot) else {
            return Ok(None);
        };
        let curr = self.prev.as_ref().expect("just set");
        let l = moving_distance_with(&prev, curr, self.mode)?;
        self.curve.push((curr.epoch, l));
        let history: Vec<f64> = self.curve.iter().map(|&(_, l)| l).collect();
        let decision = should_stop(&history)?;
        if decision.stop && self.stopped_at.is_none() {
            self.stopped_at = Some(curr.epoch);
        }
        Ok(Some(decision))
    }

    pub fn curve(&self) -> &[(u32, f64)] {
        &self.curve
    }

    /// First epoch at which the rule fired.
    pub fn stopped_at(&self) -> Option<u32> {
        self.stopped_at
    }
}

/// Moving-distance curve over a whole store.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityScan {
    /// `(epoch, L)` for every snapshot after the first.
    pub curve: Vec<(u32, f64)>,
    pub stop_epoch: Option<u32>,
}

impl StabilityScan {
    pub fn peak(&self) -> Option<(u32, f64)> {
        self.curve
            .iter()
            .copied()
            .fold(None, |best: Option<(u32, f64)>, p| match best {
                Some(b) if b.1 >= p.1 => Some(b),
                _ => Some(p),
            })
    }
}

/// Snapshot the store every `cadence` epochs, starting at the first epoch
/// with a full window, and run the stop rule over the resulting curve.
/// `cadence = None` uses the window length (non-overlapping windows).
pub fn scan_stability(
    store: &TrajectoryStore,
    window: DadWindow,
    cadence: Option<u32>,
    mode: DistanceMode,
) -> Result<StabilityScan> {
    let cadence = cadence.unwrap_or(window.len());
    if cadence == 0 {
        return Err(Error::OutOfRange {
            name: "cadence",
            value: 0.0,
            range: ">= 1",
        });
    }
    let first = store.first_epoch().ok_or(Error::Empty("trajectory store"))?;
    let last = store.last_epoch().expect("non-empty");
    let mut monitor = StopMonitor::new(mode);
    let mut t = first + window.len() - 1;
    while t <= last {
        monitor.observe(snapshot(store, t, window)?)?;
        t += cadence;
    }
    Ok(StabilityScan {
        curve: monitor.curve,
        stop_epoch: monitor.stopped_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store_from(trajs: &[(&str, &[f64])]) -> TrajectoryStore {
        let records = trajs.iter().flat_map(|(id, values)| {
            values
                .iter()
                .enumerate()
                .map(move |(e, &d)| ScoreRecord::new(*id, e as u32 + 1, d))
        });
        TrajectoryStore::from_records(records).unwrap().0
    }

    fn w(n: u32) -> DadWindow {
        DadWindow::new(n).unwrap()
    }

    #[test]
    fn dad_examples() {
        let s = store_from(&[("a", &[0.7; 12]), ("b", &[0.2, 0.4, 0.6, 0.8, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])]);
        assert!((dad_score(&s, "a", 12, w(10)).unwrap() - 0.7).abs() < 1e-12);
        assert!((dad_score(&s, "b", 4, w(4)).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(dad_score(&s, "b", 3, w(1)).unwrap(), 0.6);
        assert!(matches!(
            dad_score(&s, "zzz", 4, w(4)),
            Err(Error::UnknownSample(_))
        ));
        assert!(matches!(
            dad_score(&s, "a", 2, w(4)),
            Err(Error::WindowBeforeStart { .. })
        ));
        match dad_score(&s, "a", 14, w(4)) {
            Err(Error::IncompleteWindow { missing, .. }) => assert_eq!(missing, vec![13, 14]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn default_window_is_ten() {
        assert_eq!(DadWindow::default().len(), 10);
        assert!(DadWindow::new(0).is_err());
    }

    #[test]
    fn full_horizon_examples() {
        let s = store_from(&[("a", &[0.0, 1.0])]);
        assert_eq!(full_horizon_dad(&s, "a", 2).unwrap(), 0.5);
        assert_eq!(full_horizon_dad(&s, "a", 1).unwrap(), 0.0);
        let single = store_from(&[("a", &[0.42])]);
        assert_eq!(full_horizon_dad(&single, "a", 1).unwrap(), 0.42);
        assert!(full_horizon_dad(&s, "a", 3).is_err());
    }

    #[test]
    fn variability_examples() {
        let s = store_from(&[("c", &[0.3; 5]), ("d", &[0.0, 1.0, 0.2, 0.4, 0.6])]);
        assert_eq!(variability(&s, "c", 5, w(5)).unwrap(), 0.0);
        assert!((variability(&s, "d", 2, w(2)).unwrap() - 0.5).abs() < 1e-12);
        // window (1.0, 0.2, 0.4, 0.6), mean 0.55
        let expected = ((0.2025f64 + 0.1225 + 0.0225 + 0.0025) / 4.0).sqrt();
        assert!((variability(&s, "d", 5, w(4)).unwrap() - expected).abs() < 1e-12);
        let e = store_from(&[("e", &[0.2, 0.4, 0.6, 0.8])]);
        assert!((variability(&e, "e", 4, w(4)).unwrap() - 0.05f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn snapshot_is_composition_of_per_sample_ops() {
        let s = store_from(&[
            ("b", &[0.1, 0.5, 0.9, 0.4]),
            ("a", &[0.3, 0.3, 0.2, 0.8]),
            ("c", &[0.6; 4]),
        ]);
        let snap = snapshot(&s, 4, w(3)).unwrap();
        assert_eq!(snap.len(), 3);
        let ids: Vec<_> = snap.points.iter().map(|p| p.sample_id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        for p in &snap.points {
            assert_eq!(p.mu, dad_score(&s, &p.sample_id, 4, w(3)).unwrap());
            assert_eq!(p.sigma, variability(&s, &p.sample_id, 4, w(3)).unwrap());
        }
        assert_eq!(snap.points[2].sigma, 0.0);
    }

    #[test]
    fn snapshot_names_incomplete_sample() {
        let records = vec![
            ScoreRecord::new("a", 1, 0.1),
            ScoreRecord::new("b", 1, 0.1),
        ];
        let (s, _) = TrajectoryStore::from_records(records).unwrap();
        assert!(matches!(
            snapshot(&s, 0, w(2)),
            Err(Error::WindowBeforeStart { .. })
        ));
        match snapshot(&s, 2, w(2)) {
            Err(Error::IncompleteWindow { sample, .. }) => assert_eq!(sample, "a"),
            other => panic!("{other:?}"),
        }
        let (s, _) = TrajectoryStore::from_records(vec![ScoreRecord::new("a", 5, 0.1)]).unwrap();
        match snapshot(&s, 6, w(2)) {
            Err(Error::IncompleteWindow { sample, missing }) => {
                assert_eq!(sample, "a");
                assert_eq!(missing, vec![6]);
            }
            other => panic!("{other:?}"),
        }
    }

    fn snap(points: &[(&str, f64, f64)]) -> DynamicsSnapshot {
        DynamicsSnapshot {
            epoch: 0,
            window: DadWindow::default(),
            points: points
                .iter()
                .map(|&(id, mu, sigma)| SamplePoint {
                    sample_id: id.into(),
                    mu,
                    sigma,
                })
                .collect(),
        }
    }

    #[test]
    fn moving_distance_examples() {
        let a = snap(&[("x", 0.3, 0.1), ("y", 0.5, 0.0)]);
        assert_eq!(moving_distance(&a, &a).unwrap(), 0.0);
        let before = snap(&[("s", 0.3, 0.1)]);
        let after = snap(&[("s", 0.5, 0.2)]);
        assert!((moving_distance(&before, &after).unwrap() - 0.3).abs() < 1e-12);

        // opposite moves cancel only in signed mode
        let p = snap(&[("x", 0.5, 0.1), ("y", 0.5, 0.1)]);
        let q = snap(&[("x", 0.7, 0.1), ("y", 0.3, 0.1)]);
        assert!((moving_distance(&p, &q).unwrap() - 0.4).abs() < 1e-12);
        assert!(moving_distance_with(&p, &q, DistanceMode::Signed).unwrap().abs() < 1e-12);
    }

    #[test]
    fn moving_distance_reports_symmetric_difference() {
        let a = snap(&[("x", 0.1, 0.0), ("y", 0.1, 0.0)]);
        let b = snap(&[("x", 0.1, 0.0), ("z", 0.1, 0.0)]);
        match moving_distance(&a, &b) {
            Err(Error::SampleSetMismatch {
                only_in_first,
                only_in_second,
            }) => {
                assert_eq!(only_in_first, vec!["y"]);
                assert_eq!(only_in_second, vec!["z"]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stop_rule_examples() {
        assert!(should_stop(&[10.0, 5.0, 0.05]).unwrap().stop);
        let d = should_stop(&[10.0, 5.0, 2.0]).unwrap();
        assert!(!d.stop);
        assert_eq!(d.l_max, 10.0);
        assert!((d.ratio - 0.2).abs() < 1e-12);
        assert!(!should_stop(&[0.0]).unwrap().stop);
        assert!(should_stop(&[]).is_err());
        // exactly 1% does not stop
        assert!(!should_stop(&[10.0, 0.1]).unwrap().stop);
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(subset_overlap(&["a", "b"], &["b", "a"]).unwrap(), 1.0);
        assert_eq!(subset_overlap(&["a", "b"], &["c", "d"]).unwrap(), 0.0);
        assert_eq!(subset_overlap(&["a", "b"], &["a", "d"]).unwrap(), 0.5);
        assert!(matches!(
            subset_overlap(&["a"], &["a", "b"]),
            Err(Error::SubsetSizeMismatch(1, 2))
        ));
        assert!(subset_overlap::<&str>(&[], &[]).is_err());
    }

    #[test]
    fn builder_drops_partial_epochs() {
        let mut b = StoreBuilder::new();
        for (id, e) in [("a", 1), ("b", 1), ("a", 2)] {
            b.insert(ScoreRecord::new(id, e, 0.5), 0).unwrap();
        }
        let (s, partial) = b.finish();
        assert_eq!(s.epoch_count(), 1);
        assert_eq!(
            partial,
            vec![PartialEpoch {
                epoch: 2,
                present: 1,
                expected: 2
            }]
        );
        assert!(s.trajectory("a").unwrap().get(&2).is_none());
    }

    #[test]
    fn builder_rejects_duplicates_and_bad_dice() {
        let mut b = StoreBuilder::new();
        b.insert(ScoreRecord::new("s1", 3, 0.5), 4).unwrap();
        match b.insert(ScoreRecord::new("s1", 3, 0.6), 9) {
            Err(Error::Format(FormatError::DuplicateRecord {
                first_line,
                second_line,
                ..
            })) => assert_eq!((first_line, second_line), (4, 9)),
            other => panic!("{other:?}"),
        }
        assert!(b.insert(ScoreRecord::new("s2", 3, 1.2), 10).is_err());
    }

    #[test]
    fn scan_on_a_settling_store() {
        // both samples climb then flatten; L must peak early and fall to zero
        let rise: Vec<f64> = (0..40).map(|e| (e as f64 / 10.0).min(1.0) * 0.9).collect();
        let slow: Vec<f64> = (0..40).map(|e| (e as f64 / 20.0).min(1.0) * 0.8).collect();
        let s = store_from(&[("a", &rise), ("b", &slow)]);
        let scan = scan_stability(&s, w(5), None, DistanceMode::Absolute).unwrap();
        assert_eq!(scan.curve.len(), 7);
        assert_eq!(scan.curve[0].0, 10);
        let stop = scan.stop_epoch.expect("flat tail must stop");
        assert!(stop > scan.peak().unwrap().0);
    }
}
