//! End to end from volumes: simulated predictions are dumped as DDT1 files,
//! scored against ground truth each epoch, appended to a stream, and the
//! stream drives the pruning decision.
//!
//! ```text
//! cargo run --example mask_pipeline [out_dir]
//! ```

use dadprune::dynamics::{snapshot, DadWindow};
use dadprune::io::{append_records, ingest_path, score_volumes, write_manifest, write_volume, Volume};
use dadprune::pruning::{prune, rank_snapshot, Strategy};
use dadprune::sim::{ball, planted_ensemble, simulate_mask_sequence, SimConfig};
use dadprune::volume::Dims;

fn main() -> dadprune::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("dadprune-pipeline"));
    let _ = std::fs::remove_dir_all(&out);
    let truth_dir = out.join("truth");
    std::fs::create_dir_all(&truth_dir).expect("output dir");
    let stream = out.join("scores.jsonl");

    let epochs = 30;
    let dims = Dims::new(20, 20, 16)?;
    let specs = planted_ensemble(12, &SimConfig::default(), 2);
    for (i, spec) in specs.iter().enumerate() {
        let truth = ball(dims, 4.0 + 0.2 * i as f64);
        let name = format!("{}.ddt1", spec.sample_id);
        write_volume(truth_dir.join(&name), &Volume::Mask(truth.clone()))?;
        for frame in simulate_mask_sequence(&truth, spec, epochs, 2)? {
            let dir = out.join(format!("epoch_{:04}", frame.epoch));
            std::fs::create_dir_all(&dir).expect("epoch dir");
            write_volume(dir.join(&name), &Volume::Probability(frame.prediction))?;
        }
    }

    for epoch in 1..=epochs {
        let (records, _) = score_volumes(out.join(format!("epoch_{epoch:04}")), &truth_dir, epoch)?;
        append_records(&stream, &records)?;
    }

    let (store, warnings) = ingest_path(&stream)?;
    assert!(warnings.is_empty());
    let snap = snapshot(&store, epochs, DadWindow::default())?;
    for p in &snap.points {
        let spec = specs.iter().find(|s| s.sample_id == p.sample_id).unwrap();
        println!("{}  d = {:.2}  dad = {:.4}  sigma = {:.4}", p.sample_id, spec.difficulty, p.mu, p.sigma);
    }
    let manifest = prune(&rank_snapshot(&snap)?, Strategy::Ambiguous, 0.4, None)?;
    write_manifest(out.join("subset.json"), &manifest)?;
    println!("\nkept {:?}\nartifacts in {}", manifest.kept, out.display());
    Ok(())
}
