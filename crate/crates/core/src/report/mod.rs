//! CSV + SVG renderings of data maps, moving-distance curves, subset
//! overlaps and text listings of the extremes of a ranking.
//!
//! Renderers are pure: the same input always yields the same bytes.
//! Data-map coordinates print with 4 decimals; moving-distance values print
//! in shortest round-trip form so a curve read back from its CSV renders
//! identically.

pub mod svg;

use std::fmt::Write as _;
use std::path::Path;

use crate::dynamics::{should_stop, DynamicsSnapshot, STOP_FRACTION};
use crate::error::{Error, FormatError, Result};
use crate::pruning::{prune, rank_snapshot, Ranking, Strategy};
use svg::{Frame, Scale, SvgDoc};

/// A CSV table and the SVG chart drawn from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub csv: String,
    pub svg: String,
}

impl Rendered {
    /// Write `<prefix>.csv` and `<prefix>.svg`.
    pub fn write(&self, prefix: impl AsRef<Path>) -> Result<()> {
        let prefix = prefix.as_ref();
        for (ext, body) in [("csv", &self.csv), ("svg", &self.svg)] {
            let mut name = prefix.as_os_str().to_owned();
            name.push(".");
            name.push(ext);
            let path = std::path::PathBuf::from(name);
            std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Easy,
    Ambiguous,
    Hard,
}

impl Band {
    pub fn as_str(&self) -> &'static str {
        match self {
            Band::Easy => "easy",
            Band::Ambiguous => "ambiguous",
            Band::Hard => "hard",
        }
    }

    fn color(&self) -> &'static str {
        match self {
            Band::Easy => "#2b83ba",
            Band::Ambiguous => "#fdae61",
            Band::Hard => "#d7191c",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataMapPoint {
    pub sample_id: String,
    /// Variability.
    pub x: f64,
    /// Windowed average Dice.
    pub y: f64,
    pub band: Band,
}

/// Band of every sample for pruning fraction `p`: the samples the
/// ambiguous strategy keeps are `Ambiguous`, those trimmed off the low end
/// `Hard`, those off the high end `Easy`. Returned in snapshot order.
pub fn datamap_points(snapshot: &DynamicsSnapshot, p: f64) -> Result<Vec<DataMapPoint>> {
    if snapshot.is_empty() {
        return Err(Error::Empty("snapshot"));
    }
    let ranking = rank_snapshot(snapshot)?;
    let manifest = prune(&ranking, Strategy::Ambiguous, p, None)?;
    let kept: std::collections::HashSet<&str> = manifest.kept.iter().map(String::as_str).collect();
    let mut bands = std::collections::HashMap::with_capacity(ranking.len());
    let mut seen_kept = 0;
    for id in ranking.ids() {
        let band = if kept.contains(id) {
            seen_kept += 1;
            Band::Ambiguous
        } else if seen_kept == 0 {
            Band::Hard
        } else {
            Band::Easy
        };
        bands.insert(id, band);
    }
    Ok(snapshot
        .points
        .iter()
        .map(|pt| DataMapPoint {
            sample_id: pt.sample_id.clone(),
            x: pt.sigma,
            y: pt.mu,
            band: bands[pt.sample_id.as_str()],
        })
        .collect())
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

const WIDTH: u32 = 640;
const HEIGHT: u32 = 480;

fn frame(right_margin: f64) -> Frame {
    Frame {
        left: 70.0,
        top: 40.0,
        right: WIDTH as f64 - right_margin,
        bottom: HEIGHT as f64 - 60.0,
    }
}

/// Scatter of variability (horizontal) against average Dice (vertical),
/// colored by band for pruning fraction `p`.
pub fn render_datamap(snapshot: &DynamicsSnapshot, p: f64) -> Result<Rendered> {
    let points = datamap_points(snapshot, p)?;

    let mut csv = String::from("sample_id,mu,sigma,band\n");
    for pt in &points {
        writeln!(
            csv,
            "{},{:.4},{:.4},{}",
            csv_field(&pt.sample_id),
            pt.y,
            pt.x,
            pt.band.as_str()
        )
        .unwrap();
    }

    let f = frame(130.0);
    let xs = Scale::new((0.0, 0.5), (f.left, f.right));
    let ys = Scale::new((0.0, 1.0), (f.bottom, f.top));
    let mut doc = SvgDoc::new(WIDTH, HEIGHT);
    doc.text(
        0.5 * (f.left + f.right),
        22.0,
        "middle",
        &format!(
            "Data map, epoch {}, window {}, p = {:.2}",
            snapshot.epoch,
            snapshot.window.len(),
            p
        ),
    );
    let x_ticks = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
    let y_ticks = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
    doc.axes(
        &f,
        (&xs, &x_ticks, "variability"),
        (&ys, &y_ticks, "confidence (average Dice)"),
        |t| format!("{t:.1}"),
    );
    for pt in &points {
        doc.marker(
            xs.map(pt.x),
            ys.map(pt.y),
            3.5,
            pt.band.color(),
            &format!("{} mu={:.4} sigma={:.4}", pt.sample_id, pt.y, pt.x),
        );
    }
    let lx = f.right + 20.0;
    for (i, band) in [Band::Easy, Band::Ambiguous, Band::Hard].iter().enumerate() {
        let count = points.iter().filter(|pt| pt.band == *band).count();
        let ly = f.top + 10.0 + 22.0 * i as f64;
        doc.rect(lx, ly - 9.0, 12.0, 12.0, band.color(), "legend");
        doc.text(lx + 18.0, ly + 1.0, "start", &format!("{} ({count})", band.as_str()));
    }
    Ok(Rendered {
        csv,
        svg: doc.finish(),
    })
}

/// Epoch at which the stop rule first fires on `history`, if ever.
pub fn stop_epoch(history: &[(u32, f64)]) -> Option<u32> {
    let values: Vec<f64> = history.iter().map(|&(_, l)| l).collect();
    (1..values.len())
        .find(|&i| should_stop(&values[..=i]).map(|d| d.stop).unwrap_or(false))
        .map(|i| history[i].0)
}

/// Line chart of the moving distance with a rule at 1% of its maximum and,
/// when the stop rule fires, a vertical rule at that epoch.
pub fn render_l_curve(history: &[(u32, f64)]) -> Result<Rendered> {
    if history.is_empty() {
        return Err(Error::Empty("moving-distance history"));
    }
    let mut csv = String::from("epoch,L\n");
    for &(e, l) in history {
        writeln!(csv, "{e},{l:?}").unwrap();
    }

    let l_max = history.iter().map(|&(_, l)| l).fold(f64::NEG_INFINITY, f64::max);
    let l_min = history.iter().map(|&(_, l)| l).fold(f64::INFINITY, f64::min);
    let y_hi = if l_max > 0.0 { l_max * 1.05 } else { 1.0 };
    let y_lo = l_min.min(0.0);
    let first = history[0].0 as f64;
    let last = history[history.len() - 1].0 as f64;
    let (x_lo, x_hi) = if last > first { (first, last) } else { (first - 1.0, first + 1.0) };

    let f = frame(30.0);
    let xs = Scale::new((x_lo, x_hi), (f.left, f.right));
    let ys = Scale::new((y_lo, y_hi), (f.bottom, f.top));
    let mut doc = SvgDoc::new(WIDTH, HEIGHT);
    doc.text(
        0.5 * (f.left + f.right),
        22.0,
        "middle",
        "Moving distance of the data map",
    );
    let x_ticks: Vec<f64> = (0..=4).map(|i| x_lo + (x_hi - x_lo) * i as f64 / 4.0).collect();
    let y_ticks: Vec<f64> = (0..=4).map(|i| y_lo + (y_hi - y_lo) * i as f64 / 4.0).collect();
    doc.axes(&f, (&xs, &x_ticks, "epoch"), (&ys, &y_ticks, "L"), |t| {
        if t.abs() >= 100.0 || t == t.trunc() {
            format!("{t:.0}")
        } else {
            format!("{t:.2}")
        }
    });
    let threshold = STOP_FRACTION * l_max;
    doc.dashed_line(
        f.left,
        ys.map(threshold),
        f.right,
        ys.map(threshold),
        "#888888",
        "threshold",
    );
    if let Some(stop) = stop_epoch(history) {
        let x = xs.map(stop as f64);
        doc.dashed_line(x, f.top, x, f.bottom, "#d7191c", "stop");
        doc.text(x + 4.0, f.top + 12.0, "start", &format!("stop @ {stop}"));
    }
    let pts: Vec<(f64, f64)> = history
        .iter()
        .map(|&(e, l)| (xs.map(e as f64), ys.map(l)))
        .collect();
    doc.polyline(&pts, "#2b83ba");
    for (&(e, l), &(x, y)) in history.iter().zip(&pts) {
        doc.marker(x, y, 2.5, "#2b83ba", &format!("epoch {e}: L = {l:.4}"));
    }
    Ok(Rendered {
        csv,
        svg: doc.finish(),
    })
}

/// Read back the CSV written by [`render_l_curve`].
pub fn parse_l_curve_csv(text: &str) -> Result<Vec<(u32, f64)>> {
    let bad = |line: usize, message: String| Error::Format(FormatError::BadLine { line, message });
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "epoch,L")) => {}
        _ => return Err(bad(1, "expected header `epoch,L`".into())),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let row = || bad(i + 1, format!("expected `epoch,L`, found `{line}`"));
            let (e, l) = line.split_once(',').ok_or_else(row)?;
            Ok((e.parse().map_err(|_| row())?, l.parse().map_err(|_| row())?))
        })
        .collect()
}

/// Bar chart of subset overlap against an anchor epoch; the anchor's own
/// bar is drawn in red.
pub fn render_overlap_bars(anchor_epoch: u32, bars: &[(u32, f64)]) -> Result<Rendered> {
    if bars.is_empty() {
        return Err(Error::Empty("overlap bars"));
    }
    let mut csv = String::from("epoch,overlap\n");
    for &(e, o) in bars {
        writeln!(csv, "{e},{o:.4}").unwrap();
    }
    let f = frame(30.0);
    let ys = Scale::new((0.0, 1.0), (f.bottom, f.top));
    let slot = (f.right - f.left) / bars.len() as f64;
    let mut doc = SvgDoc::new(WIDTH, HEIGHT);
    doc.text(
        0.5 * (f.left + f.right),
        22.0,
        "middle",
        &format!("Subset overlap with epoch {anchor_epoch}"),
    );
    let y_ticks = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
    let xs = Scale::new((0.0, 1.0), (f.left, f.right));
    doc.axes(&f, (&xs, &[], "scoring epoch"), (&ys, &y_ticks, "overlap"), |t| {
        format!("{t:.1}")
    });
    for (i, &(e, o)) in bars.iter().enumerate() {
        let x = f.left + slot * i as f64 + 0.15 * slot;
        let color = if e == anchor_epoch { "#d7191c" } else { "#2b83ba" };
        doc.rect(x, ys.map(o), 0.7 * slot, f.bottom - ys.map(o), color, "bar");
        doc.text(x + 0.35 * slot, f.bottom + 16.0, "middle", &e.to_string());
    }
    Ok(Rendered {
        csv,
        svg: doc.finish(),
    })
}

/// Text report of the `k` lowest- and `k` highest-scored samples, each
/// section in ascending score order.
pub fn rank_listing(ranking: &Ranking, k: usize) -> Result<String> {
    let n = ranking.len();
    if 2 * k > n {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
            range: "[0, n/2]",
        });
    }
    let entries = ranking.entries();
    let width = entries[..k]
        .iter()
        .chain(&entries[n - k..])
        .map(|e| e.sample_id.len())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let epoch = ranking
        .scoring_epoch
        .map(|e| format!(" at epoch {e}"))
        .unwrap_or_default();
    writeln!(out, "{} ranking{epoch}, {n} samples", ranking.metric).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "{k} lowest {} (hard-to-learn):", ranking.metric).unwrap();
    for e in &entries[..k] {
        writeln!(out, "  {:<width$}  {:.4}", e.sample_id, e.score).unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "{k} highest {} (easy-to-learn):", ranking.metric).unwrap();
    for e in &entries[n - k..] {
        writeln!(out, "  {:<width$}  {:.4}", e.sample_id, e.score).unwrap();
    }
    Ok(out)
}
