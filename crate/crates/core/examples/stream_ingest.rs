//! Reading a score stream while it is still being written: chunked input, a
//! half-written last line and an epoch not every sample has reached yet.
//!
//! ```text
//! cargo run --example stream_ingest
//! ```

use dadprune::dynamics::ScoreRecord;
use dadprune::io::stream::format_line;
use dadprune::io::StreamIngest;

fn main() -> dadprune::Result<()> {
    let mut text = String::new();
    for epoch in 1..=3 {
        for (id, base) in [("liver_01", 0.125), ("liver_02", 0.25), ("liver_03", 0.375)] {
            if epoch == 3 && id == "liver_03" {
                continue;
            }
            let dice = base + 0.125 * epoch as f64;
            let r = ScoreRecord::new(id, epoch, dice).with_metric("el2n", 1.0 - dice);
            text.push_str(&format_line(&r));
            text.push('\n');
        }
    }
    text.push_str(r#"{"sample_id":"liver_03","epo"#);
    print!("{text}\n\n");

    let mut ingest = StreamIngest::new();
    for chunk in text.as_bytes().chunks(37) {
        ingest.feed(chunk)?;
    }
    println!("{} complete records", ingest.records_read());
    let (store, warnings) = ingest.finish()?;
    for w in &warnings {
        println!("warning: {w}");
    }
    println!("usable epochs: {:?}", store.epochs().collect::<Vec<_>>());
    for (id, v) in store.metric_at(2, "el2n")? {
        println!("  {id} el2n@2 = {v:.2}");
    }
    Ok(())
}
