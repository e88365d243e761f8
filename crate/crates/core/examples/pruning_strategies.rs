//! The four retention strategies on one ranking, and the manifest each
//! produces.
//!
//! ```text
//! cargo run --example pruning_strategies
//! ```

use dadprune::dynamics::{snapshot, DadWindow, TrajectoryStore};
use dadprune::io::manifest::encode_manifest;
use dadprune::pruning::{kept_size, prune, rank_snapshot, Strategy};
use dadprune::sim::{planted_ensemble, simulate_trajectories, SimConfig};

fn main() -> dadprune::Result<()> {
    let specs = planted_ensemble(10, &SimConfig::default(), 3);
    let (store, _) = TrajectoryStore::from_records(simulate_trajectories(&specs, 60, 3)?)?;
    let ranking = rank_snapshot(&snapshot(&store, 40, DadWindow::default())?)?;

    println!("ranking (ascending DAD):");
    for e in ranking.entries() {
        println!("  {}  {:.4}", e.sample_id, e.score);
    }
    let p = 0.4;
    println!("\np = {p}: keep {} of {}", kept_size(ranking.len(), p), ranking.len());
    for s in Strategy::ALL {
        let m = prune(&ranking, s, p, Some(11))?;
        println!("  {:<9} kept {:?}", s.to_string(), m.kept);
    }

    let m = prune(&ranking, Strategy::Ambiguous, p, None)?;
    println!("\n{}", String::from_utf8_lossy(&encode_manifest(&m)));
    Ok(())
}
