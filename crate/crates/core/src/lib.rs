//! Dataset pruning for dense-labeling (segmentation) tasks.
//!
//! Training runs stream per-sample Dice scores, one line per sample per
//! epoch. From those trajectories the crate computes each sample's windowed
//! average Dice (DAD) and its variability, tracks how far the resulting data
//! map moves between snapshots, signals when rankings have settled, and
//! writes the pruned subset as a manifest.
//!
//! | module | contents |
//! |---|---|
//! | [`metrics`] | Dice, EL2N, EL2Nx, whole-volume L2, variance of saliency |
//! | [`dynamics`] | trajectory store, DAD, variability, snapshots, moving distance, stop rule |
//! | [`pruning`] | rankings and the ambiguous / easy / hard / random strategies |
//! | [`io`] | DDT1 volumes, JSONL score streams, manifests, batch scoring |
//! | [`report`] | data maps, moving-distance curves, overlap bars, listings |
//! | [`sim`] | synthetic trajectories and mask sequences with planted difficulty |
//!
//! ```
//! use dadprune::dynamics::{snapshot, DadWindow, TrajectoryStore};
//! use dadprune::pruning::{prune, rank_snapshot, Strategy};
//! use dadprune::sim::{planted_ensemble, simulate_trajectories, SimConfig};
//!
//! let specs = planted_ensemble(20, &SimConfig::default(), 1);
//! let records = simulate_trajectories(&specs, 60, 1).unwrap();
//! let (store, _) = TrajectoryStore::from_records(records).unwrap();
//! let snap = snapshot(&store, 40, DadWindow::default()).unwrap();
//! let manifest = prune(&rank_snapshot(&snap).unwrap(), Strategy::Ambiguous, 0.4, None).unwrap();
//! assert_eq!(manifest.kept.len(), 12);
//! ```

pub mod dynamics;
pub mod error;
pub mod io;
pub mod metrics;
pub mod pruning;
pub mod report;
pub mod sim;
pub mod stats;
pub mod volume;

pub use error::{Error, FormatError, Result};

/// Written into every manifest.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
