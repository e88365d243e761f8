//! Line-oriented score stream.
//!
//! Each line is one JSON object:
//!
//! ```text
//! {"sample_id":"case_007","epoch":12,"dice":0.8125,"el2n":0.0931}
//! ```
//!
//! `sample_id`, `epoch` and `dice` are required; any other key must be a
//! number and is kept as an extra metric. A final line without its newline
//! is still ingested if it holds a complete record; otherwise it is treated
//! as an in-progress write, reported as a warning and skipped.

use std::fs::OpenOptions;
use std::io::{Read, Write};
use std::path::Path;

use crate::dynamics::{PartialEpoch, ScoreRecord, StoreBuilder, TrajectoryStore};
use crate::error::{Error, FormatError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IngestWarning {
    /// The final line was cut off mid-write; `line` is its 1-based number.
    TruncatedFinalLine { line: usize, bytes: usize },
    /// Epochs not reported by every known sample; excluded from analysis.
    PartialEpochs(Vec<PartialEpoch>),
    /// No records were read.
    Empty,
}

impl std::fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IngestWarning::TruncatedFinalLine { line, bytes } => {
                write!(f, "line {line}: truncated final line ({bytes} bytes) ignored")
            }
            IngestWarning::PartialEpochs(epochs) => {
                write!(f, "excluded partial epochs:")?;
                for p in epochs {
                    write!(f, " {} ({}/{})", p.epoch, p.present, p.expected)?;
                }
                Ok(())
            }
            IngestWarning::Empty => write!(f, "stream contained no records"),
        }
    }
}

/// Parse one stream line (without its newline).
pub fn parse_line(text: &str, line: usize) -> Result<ScoreRecord, FormatError> {
    let record: ScoreRecord =
        serde_json::from_str(text).map_err(|e| FormatError::BadLine {
            line,
            message: e.to_string(),
        })?;
    if !(0.0..=1.0).contains(&record.dice) {
        return Err(FormatError::DiceOutOfRange {
            line,
            value: record.dice,
        });
    }
    Ok(record)
}

pub fn format_line(record: &ScoreRecord) -> String {
    serde_json::to_string(record).expect("score records always serialize")
}

/// Incremental ingestion: feed bytes in arbitrary chunks, then
/// [`finish`](StreamIngest::finish).
#[derive(Debug, Default)]
pub struct StreamIngest {
    builder: StoreBuilder,
    pending: Vec<u8>,
    lines_seen: usize,
}

impl StreamIngest {
    pub fn new() -> Self {
        Self::default()
    }

    /// Consume every complete line in `chunk`; a trailing partial line is
    /// buffered until the next call.
    pub fn feed(&mut self, chunk: &[u8]) -> Result<()> {
        self.pending.extend_from_slice(chunk);
        let Some(last_nl) = self.pending.iter().rposition(|&b| b == b'\n') else {
            return Ok(());
        };
        let rest = self.pending.split_off(last_nl + 1);
        let complete = std::mem::replace(&mut self.pending, rest);
        for raw in complete[..complete.len() - 1].split(|&b| b == b'\n') {
            self.lines_seen += 1;
            self.ingest_line(raw, self.lines_seen)?;
        }
        Ok(())
    }

    fn ingest_line(&mut self, raw: &[u8], line: usize) -> Result<()> {
        let text = std::str::from_utf8(raw).map_err(|e| FormatError::BadLine {
            line,
            message: e.to_string(),
        })?;
        let text = text.trim_end_matches('\r');
        if text.trim().is_empty() {
            return Ok(());
        }
        let record = parse_line(text, line)?;
        self.builder.insert(record, line)
    }

    pub fn records_read(&self) -> usize {
        self.builder.len()
    }

    pub fn finish(mut self) -> Result<(TrajectoryStore, Vec<IngestWarning>)> {
        let mut warnings = Vec::new();
        if !self.pending.iter().all(u8::is_ascii_whitespace) {
            let line = self.lines_seen + 1;
            let raw = std::mem::take(&mut self.pending);
            let parsed = std::str::from_utf8(&raw)
                .ok()
                .and_then(|t| serde_json::from_str::<ScoreRecord>(t.trim_end()).ok());
            match parsed {
                Some(_) => self.ingest_line(&raw, line)?,
                None => warnings.push(IngestWarning::TruncatedFinalLine {
                    line,
                    bytes: raw.len(),
                }),
            }
        }
        if self.builder.is_empty() {
            warnings.push(IngestWarning::Empty);
        }
        let (store, partial) = self.builder.finish();
        if !partial.is_empty() {
            warnings.push(IngestWarning::PartialEpochs(partial));
        }
        Ok((store, warnings))
    }
}

pub fn ingest_reader(mut reader: impl Read) -> Result<(TrajectoryStore, Vec<IngestWarning>)> {
    let mut ingest = StreamIngest::new();
    let mut buf = vec![0u8; 64 * 1024];
    loop {
        let n = reader
            .read(&mut buf)
            .map_err(|e| Error::io("<stream>", e))?;
        if n == 0 {
            break;
        }
        ingest.feed(&buf[..n])?;
    }
    ingest.finish()
}

pub fn ingest_path(path: impl AsRef<Path>) -> Result<(TrajectoryStore, Vec<IngestWarning>)> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_reader(std::io::BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Append records to a stream file, one line each, creating it if needed.
pub fn append_records<'a>(
    path: impl AsRef<Path>,
    records: impl IntoIterator<Item = &'a ScoreRecord>,
) -> Result<usize> {
    let path = path.as_ref();
    let mut text = String::new();
    let mut count = 0;
    for r in records {
        text.push_str(&format_line(r));
        text.push('\n');
        count += 1;
    }
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    file.write_all(text.as_bytes())
        .map_err(|e| Error::io(path, e))?;
    Ok(count)
}

pub fn write_records<'a>(
    mut out: impl Write,
    records: impl IntoIterator<Item = &'a ScoreRecord>,
) -> std::io::Result<()> {
    for r in records {
        writeln!(out, "{}", format_line(r))?;
    }
    Ok(())
}
