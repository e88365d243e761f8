//! Feed snapshots to a stop monitor as training progresses and watch the
//! moving distance rise, peak and decay. Writes `l_curve.csv` / `.svg`.
//!
//! ```text
//! cargo run --example stop_monitor [out_dir]
//! ```

use dadprune::dynamics::{snapshot, subset_overlap, DadWindow, DistanceMode, StopMonitor, TrajectoryStore};
use dadprune::pruning::{prune, rank_snapshot, Strategy};
use dadprune::report::render_l_curve;
use dadprune::sim::{planted_ensemble, simulate_trajectories, SimConfig};

fn main() -> dadprune::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("dadprune-examples"));
    std::fs::create_dir_all(&out).expect("output dir");

    let cfg = SimConfig {
        noise: 0.001,
        onset_jitter: 40,
        ..SimConfig::default()
    };
    let specs = planted_ensemble(100, &cfg, 1);
    let (store, _) = TrajectoryStore::from_records(simulate_trajectories(&specs, 600, 1)?)?;
    let w = DadWindow::default();

    let mut monitor = StopMonitor::new(DistanceMode::Absolute);
    let mut t = w.len();
    while t <= 600 {
        if let Some(d) = monitor.observe(snapshot(&store, t, w)?)? {
            if t % 50 == 0 || d.stop {
                println!("epoch {t:>3}: L = {:>8.4}  ({:>6.2}% of max)", d.current, 100.0 * d.ratio);
            }
            if d.stop {
                println!("stop rule fired at epoch {t}");
                break;
            }
        }
        t += w.len();
    }
    let stop = monitor.stopped_at().expect("settles");

    let hardest = |t| -> dadprune::Result<Vec<String>> {
        Ok(prune(&rank_snapshot(&snapshot(&store, t, w)?)?, Strategy::Hard, 0.6, None)?.kept)
    };
    let last = hardest(600)?;
    for e in [stop / 4, stop / 2, stop] {
        println!("hardest 40% at epoch {e:>3} vs epoch 600: overlap {:.2}", subset_overlap(&hardest(e)?, &last)?);
    }

    render_l_curve(monitor.curve())?.write(out.join("l_curve"))?;
    println!("wrote {}", out.join("l_curve.{csv,svg}").display());
    Ok(())
}
