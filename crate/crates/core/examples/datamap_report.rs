//! Data map of a simulated run: one point per sample at (variability,
//! average Dice), colored by the band each pruning strategy would drop.
//! Writes `datamap.csv` / `.svg`, `overlap.csv` / `.svg` and prints a
//! listing of the extremes.
//!
//! ```text
//! cargo run --example datamap_report [out_dir]
//! ```

use dadprune::dynamics::{snapshot, subset_overlap, DadWindow, TrajectoryStore};
use dadprune::pruning::{prune, rank_snapshot, Strategy};
use dadprune::report::{rank_listing, render_datamap, render_overlap_bars};
use dadprune::sim::{planted_ensemble, simulate_trajectories, SimConfig};

fn main() -> dadprune::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("dadprune-examples"));
    std::fs::create_dir_all(&out).expect("output dir");

    let cfg = SimConfig {
        onset_jitter: 20,
        ..SimConfig::default()
    };
    let specs = planted_ensemble(80, &cfg, 5);
    let (store, _) = TrajectoryStore::from_records(simulate_trajectories(&specs, 300, 5)?)?;
    let w = DadWindow::default();

    let snap = snapshot(&store, 50, w)?;
    render_datamap(&snap, 0.4)?.write(out.join("datamap"))?;
    print!("{}", rank_listing(&rank_snapshot(&snap)?, 5)?);

    let select = |t| -> dadprune::Result<Vec<String>> {
        Ok(prune(&rank_snapshot(&snapshot(&store, t, w)?)?, Strategy::Ambiguous, 0.4, None)?.kept)
    };
    let anchor = select(300)?;
    let bars = [20, 50, 100, 200, 300]
        .into_iter()
        .map(|t| Ok((t, subset_overlap(&select(t)?, &anchor)?)))
        .collect::<dadprune::Result<Vec<_>>>()?;
    render_overlap_bars(300, &bars)?.write(out.join("overlap"))?;
    println!("\nwrote datamap and overlap charts to {}", out.display());
    Ok(())
}
