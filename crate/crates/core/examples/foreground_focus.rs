//! Why whole-volume error is a poor difficulty score for segmentation:
//! background voxels dominate it. EL2Nx only looks at the foreground.
//!
//! ```text
//! cargo run --example foreground_focus
//! ```

use dadprune::metrics::{dice, el2n, el2nx, vog};
use dadprune::sim::ball;
use dadprune::volume::{Dims, ProbabilityVolume, RealVolume, SaliencyStack};

fn main() -> dadprune::Result<()> {
    let dims = Dims::new(32, 32, 24)?;
    let truth = ball(dims, 5.0);
    println!("{dims} volume, {} foreground voxels", truth.foreground_count());

    // A prediction that misses the outer shell of the ball.
    let shrunk = ball(dims, 4.0);
    let pred = ProbabilityVolume::new(
        dims,
        shrunk.data().iter().map(|&v| if v == 1 { 0.9 } else { 0.05 }).collect(),
    )?;
    println!("\n{:<28} {:>8} {:>8} {:>8}", "", "dice", "el2n", "el2nx");
    let row = |label: &str, p: &ProbabilityVolume, t| -> dadprune::Result<()> {
        println!(
            "{label:<28} {:>8.4} {:>8.4} {:>8.4}",
            dice(&p.threshold(), t)?,
            el2n(p, t)?,
            el2nx(p, t)?
        );
        Ok(())
    };
    row("prediction", &pred, &truth)?;

    let noisy_bg = ProbabilityVolume::new(
        dims,
        pred.data()
            .iter()
            .zip(truth.data())
            .map(|(&p, &t)| if t == 0 { p + 0.3 * (1.0 - p) } else { p })
            .collect(),
    )?;
    row("  + background haze", &noisy_bg, &truth)?;

    let big = Dims::new(96, 32, 24)?;
    let mut t = truth.data().to_vec();
    let mut p = pred.data().to_vec();
    t.resize(big.voxel_count(), 0);
    p.resize(big.voxel_count(), 0.0);
    let padded = (
        ProbabilityVolume::new(big, p)?,
        dadprune::volume::MaskVolume::new(big, t)?,
    );
    row("  padded with empty space", &padded.0, &padded.1)?;

    // Variance of gradients over a stack of saliency maps.
    let maps: Vec<RealVolume> = (0..4)
        .map(|k| {
            let data = truth
                .data()
                .iter()
                .enumerate()
                .map(|(i, &v)| v as f32 * (1.0 + 0.1 * k as f32) + ((i * 7 + k) % 5) as f32 * 0.01)
                .collect();
            RealVolume::new(dims, data)
        })
        .collect::<dadprune::Result<_>>()?;
    let stack = SaliencyStack::new(vec![10, 20, 30, 40], maps)?;
    println!("\nvog over 4 saliency snapshots: {:.6}", vog(&stack)?);
    Ok(())
}
