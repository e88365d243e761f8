//! Windowed average Dice (DAD) and variability on simulated trajectories,
//! and how late scoring stops telling samples apart.
//!
//! ```text
//! cargo run --example dad_trajectories
//! ```

use dadprune::dynamics::{dad_score, full_horizon_dad, snapshot, variability, DadWindow, TrajectoryStore};
use dadprune::sim::{planted_ensemble, simulate_trajectories, SimConfig};

fn main() -> dadprune::Result<()> {
    let cfg = SimConfig {
        plateau: Some(1.0),
        ..SimConfig::default()
    };
    let specs = planted_ensemble(5, &cfg, 7);
    let (store, _) = TrajectoryStore::from_records(simulate_trajectories(&specs, 1000, 7)?)?;
    let w = DadWindow::default();

    println!("{:<6} {:>5} {:>8} {:>8} {:>8} {:>8}", "sample", "d", "dad@15", "dad@60", "sig@60", "dad@1000");
    for spec in &specs {
        let id = spec.sample_id.as_str();
        println!(
            "{id:<6} {:>5.2} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            spec.difficulty,
            dad_score(&store, id, 15, w)?,
            dad_score(&store, id, 60, w)?,
            variability(&store, id, 60, w)?,
            dad_score(&store, id, 1000, w)?,
        );
    }

    println!("\nspread of scores across samples:");
    for t in [60, 200, 1000] {
        let snap = snapshot(&store, t, w)?;
        let mus: Vec<f64> = snap.scores().map(|(_, s)| s).collect();
        let fh: Vec<f64> = specs
            .iter()
            .map(|s| full_horizon_dad(&store, &s.sample_id, t))
            .collect::<dadprune::Result<_>>()?;
        println!(
            "  t = {t:>4}: windowed {:.4}, full-horizon {:.4}",
            range(&mus),
            range(&fh)
        );
    }
    Ok(())
}

fn range(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
}
