//! Score rankings and the four retention strategies.
//!
//! Rankings are ascending: low DAD (hard-to-learn) first, high DAD
//! (easy-to-learn) last.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::DynamicsSnapshot;
use crate::error::{Error, Result};

/// Guards half-up rounding against products like `0.7 * 5 = 3.4999…`.
const ROUNDING_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedSample {
    pub sample_id: String,
    pub score: f64,
}

/// Samples in ascending score order, ties broken by id.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub metric: String,
    pub scoring_epoch: Option<u32>,
    entries: Vec<RankedSample>,
}

impl Ranking {
    pub fn entries(&self) -> &[RankedSample] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.sample_id.as_str())
    }
}

/// Sort per-sample scores into a [`Ranking`].
pub fn rank<I, S>(scores: I, metric: &str, scoring_epoch: Option<u32>) -> Result<Ranking>
where
    I: IntoIterator<Item = (S, f64)>,
    S: Into<String>,
{
    let mut entries: Vec<RankedSample> = scores
        .into_iter()
        .map(|(id, score)| RankedSample {
            sample_id: id.into(),
            score,
        })
        .collect();
    if entries.is_empty() {
        return Err(Error::Empty("ranking input"));
    }
    if let Some(bad) = entries.iter().find(|e| !e.score.is_finite()) {
        return Err(Error::NanScore(bad.sample_id.clone()));
    }
    entries.sort_by(|a, b| {
        a.score
            .total_cmp(&b.score)
            .then_with(|| a.sample_id.cmp(&b.sample_id))
    });
    let mut seen = BTreeSet::new();
    for e in &entries {
        if !seen.insert(e.sample_id.as_str()) {
            return Err(Error::DuplicateSample(e.sample_id.clone()));
        }
    }
    Ok(Ranking {
        metric: metric.to_string(),
        scoring_epoch,
        entries,
    })
}

/// Rank a snapshot by its DAD values.
pub fn rank_snapshot(snapshot: &DynamicsSnapshot) -> Result<Ranking> {
    rank(
        snapshot.points.iter().map(|p| (p.sample_id.clone(), p.mu)),
        "dad",
        Some(snapshot.epoch),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Trim both ends, keep the middle band.
    Ambiguous,
    /// Keep the highest-scored samples.
    Easy,
    /// Keep the lowest-scored samples.
    Hard,
    /// Keep a seeded uniform subset.
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Ambiguous,
        Strategy::Easy,
        Strategy::Hard,
        Strategy::Random,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Ambiguous => "ambiguous",
            Strategy::Easy => "easy",
            Strategy::Hard => "hard",
            Strategy::Random => "random",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown strategy `{s}` (ambiguous, easy, hard, random)"))
    }
}

/// Durable record of one pruning decision.
///
/// Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneManifest {
    pub strategy: Strategy,
    pub fraction_pruned: f64,
    pub scoring_epoch: Option<u32>,
    pub metric: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub engine_version: String,
    pub kept: Vec<String>,
    pub dropped: Vec<String>,
}

impl PruneManifest {
    pub fn sample_count(&self) -> usize {
        self.kept.len() + self.dropped.len()
    }
}

/// `round((1 − p) · n)`, halves rounding up.
pub fn kept_size(n: usize, fraction: f64) -> usize {
    ((1.0 - fraction) * n as f64 + 0.5 + ROUNDING_SLACK).floor() as usize
}

/// Number of samples trimmed from the low end by the ambiguous strategy;
/// the remainder of the dropped budget comes off the high end.
pub fn ambiguous_low_trim(n: usize, fraction: f64) -> usize {
    let low = (fraction * n as f64 / 2.0 + ROUNDING_SLACK).floor() as usize;
    low.min(n - kept_size(n, fraction))
}

/// Apply a retention strategy at pruning fraction `fraction`.
///
/// `seed` is only consulted by [`Strategy::Random`] (default 0).
pub fn prune(
    ranking: &Ranking,
    strategy: Strategy,
    fraction: f64,
    seed: Option<u64>,
) -> Result<PruneManifest> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(Error::OutOfRange {
            name: "pruning fraction",
            value: fraction,
            range: "[0, 1)",
        });
    }
    let n = ranking.len();
    if n == 0 {
        return Err(Error::Empty("ranking"));
    }
    let keep = kept_size(n, fraction);
    if keep == 0 {
        return Err(Error::EmptySubset { fraction, n });
    }
    let mut kept_mask = vec![false; n];
    let seed = match strategy {
        Strategy::Ambiguous => {
            let low = ambiguous_low_trim(n, fraction);
            kept_mask[low..low + keep].fill(true);
            None
        }
        Strategy::Hard => {
            kept_mask[..keep].fill(true);
            None
        }
        Strategy::Easy => {
            kept_mask[n - keep..].fill(true);
            None
        }
        Strategy::Random => {
            let seed = seed.unwrap_or(0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in index::sample(&mut rng, n, keep) {
                kept_mask[i] = true;
            }
            Some(seed)
        }
    };
    let (mut kept, mut dropped) = (Vec::with_capacity(keep), Vec::with_capacity(n - keep));
    for (entry, &k) in ranking.entries.iter().zip(&kept_mask) {
        if k {
            kept.push(entry.sample_id.clone());
        } else {
            dropped.push(entry.sample_id.clone());
        }
    }
    Ok(PruneManifest {
        strategy,
        fraction_pruned: fraction,
        scoring_epoch: ranking.scoring_epoch,
        metric: ranking.metric.clone(),
        seed,
        engine_version: crate::ENGINE_VERSION.to_string(),
        kept,
        dropped,
    })
}
