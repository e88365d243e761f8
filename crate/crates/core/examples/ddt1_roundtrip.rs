//! Writing, reading and validating DDT1 volume files.
//!
//! ```text
//! cargo run --example ddt1_roundtrip
//! ```

use dadprune::io::ddt1::{decode, decode_header, encode};
use dadprune::io::{read_volume, write_volume, Volume};
use dadprune::volume::{Dims, MaskVolume, ProbabilityVolume};

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect::<Vec<_>>().join(" ")
}

fn main() -> dadprune::Result<()> {
    let mask = MaskVolume::filled(Dims::new(2, 2, 2)?, true);
    let bytes = encode(&Volume::Mask(mask));
    println!("2x2x2 mask:\n  {}", hex(&bytes));

    let probs = ProbabilityVolume::new(Dims::planar(2, 2)?, vec![0.0, 0.25, 0.5, 1.0])?;
    let bytes = encode(&Volume::Probability(probs.clone()));
    println!("2x2 probabilities:\n  {}", hex(&bytes));
    let header = decode_header(&bytes)?;
    println!("  dtype {}, dims {}, payload at {}", header.dtype, header.dims, header.payload_offset);

    let path = std::env::temp_dir().join("dadprune-example.ddt1");
    write_volume(&path, &Volume::Probability(probs.clone()))?;
    assert_eq!(read_volume(&path)?, Volume::Probability(probs));
    println!("round trip through {} ok", path.display());

    println!("\ncorruptions:");
    let mut bad = bytes.clone();
    bad[0] = b'N';
    println!("  {}", decode(&bad).unwrap_err());
    println!("  {}", decode(&bytes[..bytes.len() - 2]).unwrap_err());
    let mut bad = bytes.clone();
    bad[22..26].copy_from_slice(&1.5f32.to_le_bytes());
    println!("  {}", decode(&bad).unwrap_err());
    let mut bad = bytes[..14].to_vec();
    bad[5] = 3;
    bad.extend_from_slice(&u32::MAX.to_le_bytes());
    bad[6..14].copy_from_slice(&[0xff; 8]);
    println!("  {}", decode(&bad).unwrap_err());
    Ok(())
}
