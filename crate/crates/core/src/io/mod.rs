//! On-disk formats: DDT1 volumes, JSONL score streams and prune manifests.

pub mod batch;
pub mod ddt1;
pub mod manifest;
pub mod stream;

pub use batch::{score_volumes, ScoreWarning};
pub use ddt1::{read_real_volume, read_volume, write_volume, Volume};
pub use manifest::{read_manifest, write_manifest};
pub use stream::{append_records, ingest_path, ingest_reader, IngestWarning, StreamIngest};
