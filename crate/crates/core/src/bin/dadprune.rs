//! Command-line front end. Every subcommand reads and writes the formats
//! documented in `dadprune::io`.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dadprune::dynamics::{
    scan_stability, snapshot, subset_overlap, DadWindow, DistanceMode, TrajectoryStore,
};
use dadprune::io::stream::write_records;
use dadprune::io::{append_records, ingest_path, score_volumes, write_manifest, write_volume, Volume};
use dadprune::pruning::{prune, rank, rank_snapshot, Ranking, Strategy};
use dadprune::report::{rank_listing, render_datamap, render_l_curve, render_overlap_bars};
use dadprune::sim::{ball, planted_ensemble, simulate_mask_sequence, simulate_trajectories, SimConfig};
use dadprune::volume::Dims;
use dadprune::{Error, Result};

#[derive(Parser)]
#[command(name = "dadprune", version, about = "Dataset pruning from per-sample Dice dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic score streams and/or DDT1 volume directories.
    Simulate(SimulateArgs),
    /// Score a directory of predictions against ground truth and append to a stream.
    Score(ScoreArgs),
    /// Render the data map (average Dice against variability) at one epoch.
    Datamap(DatamapArgs),
    /// Compute the moving-distance curve and evaluate the stop rule.
    Curve(CurveArgs),
    /// Select a subset and write its manifest.
    Prune(PruneArgs),
    /// Compare the subsets chosen at several epochs with one anchor epoch.
    Overlap(OverlapArgs),
    /// List the lowest- and highest-scored samples.
    Listing(ListingArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 100)]
    epochs: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Base time constant; a sample of difficulty d uses tau0 * (1 + 4d).
    #[arg(long, default_value_t = 20.0)]
    tau0: f64,
    /// Gaussian noise amplitude.
    #[arg(long, default_value_t = 0.02)]
    noise: f64,
    #[arg(long, default_value_t = 5)]
    onset: u32,
    /// Each sample's onset is delayed by a uniform draw from 0..=JITTER.
    #[arg(long, default_value_t = 0)]
    onset_jitter: u32,
    /// Common plateau for every sample instead of 1 - 0.3d.
    #[arg(long)]
    plateau: Option<f64>,
    /// Score stream to (over)write.
    #[arg(long)]
    stream: Option<PathBuf>,
    /// Directory receiving `truth/` and `epoch_NNNN/` volume folders.
    #[arg(long)]
    volumes: Option<PathBuf>,
    /// Volume shape, WxH or WxHxD.
    #[arg(long, default_value = "24x24x16")]
    dims: Dims,
    /// Dump volumes every N epochs.
    #[arg(long, default_value_t = 1)]
    dump_every: u32,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    epoch: u32,
    /// Stream to append to (created if missing).
    #[arg(long)]
    stream: PathBuf,
}

#[derive(Args)]
struct StreamArgs {
    /// JSONL score stream.
    #[arg(long)]
    stream: PathBuf,
    /// DAD window length in epochs.
    #[arg(long, default_value_t = DadWindow::DEFAULT_LEN)]
    window: u32,
}

#[derive(Args)]
struct DatamapArgs {
    #[command(flatten)]
    input: StreamArgs,
    /// Scoring epoch; defaults to the last complete epoch.
    #[arg(long)]
    epoch: Option<u32>,
    /// Pruning fraction used to color the bands.
    #[arg(long, default_value_t = 0.4)]
    fraction: f64,
    /// Writes PREFIX.csv and PREFIX.svg.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    input: StreamArgs,
    /// Epochs between snapshots; defaults to the window length.
    #[arg(long)]
    cadence: Option<u32>,
    /// Sum signed rather than absolute coordinate changes.
    #[arg(long)]
    signed: bool,
    /// Writes PREFIX.csv and PREFIX.svg.
    #[arg(long)]
    out: PathBuf,
    /// Created, holding the stop epoch, once the stop rule fires.
    #[arg(long)]
    stop_file: Option<PathBuf>,
}

#[derive(Args)]
struct SelectArgs {
    #[arg(long, default_value = "ambiguous")]
    strategy: Strategy,
    /// Fraction of samples to drop.
    #[arg(long, default_value_t = 0.4)]
    fraction: f64,
    /// Seed for the random strategy.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct PruneArgs {
    #[command(flatten)]
    input: StreamArgs,
    #[command(flatten)]
    select: SelectArgs,
    #[arg(long)]
    epoch: Option<u32>,
    /// `dad`, or any extra metric recorded in the stream (ranked at the
    /// scoring epoch, ascending).
    #[arg(long, default_value = "dad")]
    metric: String,
    /// Manifest path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OverlapArgs {
    #[command(flatten)]
    input: StreamArgs,
    #[command(flatten)]
    select: SelectArgs,
    /// Reference epoch; defaults to the last complete epoch.
    #[arg(long)]
    anchor: Option<u32>,
    /// Comma-separated scoring epochs; defaults to every window-length step.
    #[arg(long, value_delimiter = ',')]
    epochs: Vec<u32>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ListingArgs {
    #[command(flatten)]
    input: StreamArgs,
    #[arg(long)]
    epoch: Option<u32>,
    #[arg(long, default_value_t = 9)]
    k: usize,
    #[arg(long, default_value = "dad")]
    metric: String,
}

fn warn(message: impl std::fmt::Display) {
    eprintln!("warning: {message}");
}

fn load(input: &StreamArgs) -> Result<(TrajectoryStore, DadWindow)> {
    let (store, warnings) = ingest_path(&input.stream)?;
    for w in warnings {
        warn(w);
    }
    Ok((store, DadWindow::new(input.window)?))
}

fn last_epoch(store: &TrajectoryStore) -> Result<u32> {
    store.last_epoch().ok_or(Error::Empty("score stream"))
}

fn ranking_at(store: &TrajectoryStore, window: DadWindow, epoch: u32, metric: &str) -> Result<Ranking> {
    if metric == "dad" {
        rank_snapshot(&snapshot(store, epoch, window)?)
    } else {
        rank(store.metric_at(epoch, metric)?, metric, Some(epoch))
    }
}

fn simulate(args: SimulateArgs) -> Result<()> {
    if args.stream.is_none() && args.volumes.is_none() {
        return Err(Error::Empty("outputs (pass --stream and/or --volumes)"));
    }
    let cfg = SimConfig {
        tau0: args.tau0,
        noise: args.noise,
        onset: args.onset,
        onset_jitter: args.onset_jitter,
        plateau: args.plateau,
    };
    let specs = planted_ensemble(args.samples, &cfg, args.seed);
    if let Some(path) = &args.stream {
        let records = simulate_trajectories(&specs, args.epochs, args.seed)?;
        let file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        write_records(&mut out, &records)
            .and_then(|()| out.flush())
            .map_err(|e| io_err(path, e))?;
        println!("{}: {} records ({} samples x {} epochs)", path.display(), records.len(), specs.len(), args.epochs);
    }
    if let Some(root) = &args.volumes {
        if args.dump_every == 0 {
            return Err(Error::OutOfRange { name: "dump-every", value: 0.0, range: ">= 1" });
        }
        let truth_dir = root.join("truth");
        create_dir(&truth_dir)?;
        let short = args.dims.width.min(args.dims.height).min(args.dims.depth) as f64;
        let n = specs.len().max(2) - 1;
        let mut dumped = 0;
        for (i, spec) in specs.iter().enumerate() {
            let radius = (short * (0.25 + 0.15 * i as f64 / n as f64)).max(1.0);
            let truth = ball(args.dims, radius);
            let name = format!("{}.ddt1", spec.sample_id);
            write_volume(truth_dir.join(&name), &Volume::Mask(truth.clone()))?;
            let frames = simulate_mask_sequence(&truth, spec, args.epochs, args.seed).inspect_err(|e| {
                if matches!(e, Error::Calibration { .. }) {
                    warn(format!(
                        "{}: {} foreground voxels is too coarse for this curve; try larger --dims",
                        spec.sample_id,
                        truth.foreground_count()
                    ));
                }
            })?;
            for frame in frames {
                if frame.epoch % args.dump_every != 0 {
                    continue;
                }
                let dir = root.join(format!("epoch_{:04}", frame.epoch));
                create_dir(&dir)?;
                write_volume(dir.join(&name), &Volume::Probability(frame.prediction))?;
                dumped += 1;
            }
        }
        println!("{}: {} truth masks, {dumped} predictions ({})", root.display(), specs.len(), args.dims);
    }
    Ok(())
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source: e }
}

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| io_err(path, e))
}

fn score(args: ScoreArgs) -> Result<()> {
    let (records, warnings) = score_volumes(&args.pred, &args.truth, args.epoch)?;
    for w in warnings {
        warn(format!("{w:?}: no .ddt1 files in {}", args.pred.display()));
    }
    let n = append_records(&args.stream, &records)?;
    println!("{}: appended {n} records for epoch {}", args.stream.display(), args.epoch);
    Ok(())
}

fn datamap(args: DatamapArgs) -> Result<()> {
    let (store, window) = load(&args.input)?;
    let epoch = args.epoch.map_or_else(|| last_epoch(&store), Ok)?;
    let rendered = render_datamap(&snapshot(&store, epoch, window)?, args.fraction)?;
    rendered.write(&args.out)?;
    println!("{}.{{csv,svg}}: data map at epoch {epoch}", args.out.display());
    Ok(())
}

fn curve(args: CurveArgs) -> Result<()> {
    let (store, window) = load(&args.input)?;
    let mode = if args.signed { DistanceMode::Signed } else { DistanceMode::Absolute };
    let scan = scan_stability(&store, window, args.cadence, mode)?;
    if scan.curve.is_empty() {
        return Err(Error::InsufficientData(format!(
            "need at least two snapshots of window {}; stream has {} epochs",
            window.len(),
            store.epoch_count()
        )));
    }
    render_l_curve(&scan.curve)?.write(&args.out)?;
    if let Some((e, l)) = scan.peak() {
        println!("peak L = {l:.4} at epoch {e}");
    }
    match scan.stop_epoch {
        Some(stop) => {
            println!("stop rule fired at epoch {stop}");
            if let Some(path) = &args.stop_file {
                std::fs::write(path, format!("{stop}\n")).map_err(|e| io_err(path, e))?;
            }
        }
        None => println!("stop rule not met"),
    }
    Ok(())
}

fn prune_cmd(args: PruneArgs) -> Result<()> {
    let (store, window) = load(&args.input)?;
    let epoch = args.epoch.map_or_else(|| last_epoch(&store), Ok)?;
    let ranking = ranking_at(&store, window, epoch, &args.metric)?;
    let manifest = prune(&ranking, args.select.strategy, args.select.fraction, args.select.seed)?;
    write_manifest(&args.out, &manifest)?;
    println!(
        "{}: {} kept, {} dropped ({} at p = {}, {} epoch {epoch})",
        args.out.display(),
        manifest.kept.len(),
        manifest.dropped.len(),
        manifest.strategy,
        manifest.fraction_pruned,
        manifest.metric
    );
    Ok(())
}

fn overlap(args: OverlapArgs) -> Result<()> {
    let (store, window) = load(&args.input)?;
    let anchor = args.anchor.map_or_else(|| last_epoch(&store), Ok)?;
    let first = store.first_epoch().ok_or(Error::Empty("score stream"))? + window.len() - 1;
    let mut epochs = if args.epochs.is_empty() {
        (first..=anchor).step_by(window.len() as usize).collect()
    } else {
        args.epochs.clone()
    };
    if !epochs.contains(&anchor) {
        epochs.push(anchor);
    }
    let select = |epoch| -> Result<Vec<String>> {
        let ranking = rank_snapshot(&snapshot(&store, epoch, window)?)?;
        Ok(prune(&ranking, args.select.strategy, args.select.fraction, args.select.seed)?.kept)
    };
    let reference = select(anchor)?;
    let mut bars = Vec::with_capacity(epochs.len());
    for e in epochs {
        let o = subset_overlap(&select(e)?, &reference)?;
        println!("{e}\t{o:.4}");
        bars.push((e, o));
    }
    render_overlap_bars(anchor, &bars)?.write(&args.out)
}

fn listing(args: ListingArgs) -> Result<()> {
    let (store, window) = load(&args.input)?;
    let epoch = args.epoch.map_or_else(|| last_epoch(&store), Ok)?;
    print!("{}", rank_listing(&ranking_at(&store, window, epoch, &args.metric)?, args.k)?);
    Ok(())
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Simulate(a) => simulate(a),
        Command::Score(a) => score(a),
        Command::Datamap(a) => datamap(a),
        Command::Curve(a) => curve(a),
        Command::Prune(a) => prune_cmd(a),
        Command::Overlap(a) => overlap(a),
        Command::Listing(a) => listing(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
