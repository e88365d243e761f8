//! DDT1 binary volume format.
//!
//! ```text
//! offset  size        field
//! 0       4           magic "DDT1"
//! 4       1           dtype: 0 = u8 mask, 1 = f32 little-endian
//! 5       1           ndim: 2 or 3
//! 6       4 * ndim    dims, u32 little-endian, (width, height[, depth])
//! ...     ...         row-major voxel payload
//! ```
//!
//! A 2x2x2 all-foreground mask is 18 header bytes followed by eight `0x01`:
//!
//! ```text
//! 44 44 54 31 00 03 02 00 00 00 02 00 00 00 02 00 00 00 01 01 01 01 01 01 01 01
//! ```

use std::path::Path;

use crate::error::{Error, FormatError, Result};
use crate::volume::{Dims, MaskVolume, ProbabilityVolume, RealVolume};

pub const MAGIC: &[u8; 4] = b"DDT1";
pub const DTYPE_MASK: u8 = 0;
pub const DTYPE_F32: u8 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Volume {
    Mask(MaskVolume),
    Probability(ProbabilityVolume),
}

impl Volume {
    pub fn dims(&self) -> Dims {
        match self {
            Volume::Mask(m) => m.dims(),
            Volume::Probability(p) => p.dims(),
        }
    }

    /// Masks pass through; probabilities are thresholded.
    pub fn to_mask(&self) -> MaskVolume {
        match self {
            Volume::Mask(m) => m.clone(),
            Volume::Probability(p) => p.threshold(),
        }
    }
}

/// Parsed header plus the byte offset where the payload starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ddt1Header {
    pub dtype: u8,
    pub dims: Dims,
    pub payload_offset: usize,
}

impl Ddt1Header {
    pub fn element_size(&self) -> usize {
        if self.dtype == DTYPE_MASK {
            1
        } else {
            4
        }
    }
}

fn header_bytes(dtype: u8, dims: &Dims) -> Vec<u8> {
    let mut out = Vec::with_capacity(6 + 4 * dims.ndim() as usize);
    out.extend_from_slice(MAGIC);
    out.push(dtype);
    out.push(dims.ndim());
    for d in dims.as_slice() {
        out.extend_from_slice(&d.to_le_bytes());
    }
    out
}

pub fn encode_mask(mask: &MaskVolume) -> Vec<u8> {
    let mut out = header_bytes(DTYPE_MASK, &mask.dims());
    out.extend_from_slice(mask.data());
    out
}

pub fn encode_f32(dims: &Dims, data: &[f32]) -> Vec<u8> {
    let mut out = header_bytes(DTYPE_F32, dims);
    out.reserve(data.len() * 4);
    for v in data {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn encode(volume: &Volume) -> Vec<u8> {
    match volume {
        Volume::Mask(m) => encode_mask(m),
        Volume::Probability(p) => encode_f32(&p.dims(), p.data()),
    }
}

pub fn decode_header(bytes: &[u8]) -> Result<Ddt1Header, FormatError> {
    if bytes.len() < 6 {
        if bytes.len() >= 4 && &bytes[..4] != MAGIC {
            return Err(FormatError::BadMagic {
                found: bytes[..4].to_vec(),
            });
        }
        return Err(FormatError::TruncatedHeader {
            needed: 6,
            available: bytes.len(),
        });
    }
    if &bytes[..4] != MAGIC {
        return Err(FormatError::BadMagic {
            found: bytes[..4].to_vec(),
        });
    }
    let dtype = bytes[4];
    if dtype != DTYPE_MASK && dtype != DTYPE_F32 {
        return Err(FormatError::UnknownDtype(dtype));
    }
    let ndim = bytes[5];
    if ndim != 2 && ndim != 3 {
        return Err(FormatError::BadNdim(ndim));
    }
    let payload_offset = 6 + 4 * ndim as usize;
    if bytes.len() < payload_offset {
        return Err(FormatError::TruncatedHeader {
            needed: payload_offset,
            available: bytes.len(),
        });
    }
    let mut dims = [1u32; 3];
    for (i, d) in dims.iter_mut().take(ndim as usize).enumerate() {
        let off = 6 + 4 * i;
        *d = u32::from_le_bytes(bytes[off..off + 4].try_into().expect("4 bytes"));
        if *d == 0 {
            return Err(FormatError::ZeroDim { offset: off });
        }
    }
    let dims = if ndim == 2 {
        Dims::planar(dims[0], dims[1])
    } else {
        Dims::new(dims[0], dims[1], dims[2])
    }
    .map_err(|_| FormatError::DimsOverflow)?;
    let header = Ddt1Header {
        dtype,
        dims,
        payload_offset,
    };
    dims.voxel_count()
        .checked_mul(header.element_size())
        .ok_or(FormatError::DimsOverflow)?;
    Ok(header)
}

fn payload<'a>(bytes: &'a [u8], header: &Ddt1Header) -> Result<&'a [u8], FormatError> {
    let expected = header.dims.voxel_count() * header.element_size();
    let found = bytes.len() - header.payload_offset;
    if found < expected {
        return Err(FormatError::TruncatedPayload {
            offset: header.payload_offset,
            expected,
            found,
        });
    }
    if found > expected {
        return Err(FormatError::TrailingBytes {
            offset: header.payload_offset + expected,
            extra: found - expected,
        });
    }
    Ok(&bytes[header.payload_offset..])
}

fn f32_values(raw: &[u8]) -> impl Iterator<Item = f32> + '_ {
    raw.chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")))
}

/// Decode a mask or probability volume, validating every voxel.
pub fn decode(bytes: &[u8]) -> Result<Volume, FormatError> {
    let header = decode_header(bytes)?;
    let raw = payload(bytes, &header)?;
    let base = header.payload_offset;
    match header.dtype {
        DTYPE_MASK => {
            if let Some(pos) = raw.iter().position(|&b| b > 1) {
                return Err(FormatError::BadMaskByte {
                    offset: base + pos,
                    value: raw[pos],
                });
            }
            Ok(Volume::Mask(MaskVolume::from_raw_unchecked(
                header.dims,
                raw.to_vec(),
            )))
        }
        _ => {
            let data: Vec<f32> = f32_values(raw).collect();
            if let Some(pos) = data.iter().position(|v| !(0.0..=1.0).contains(v)) {
                return Err(FormatError::BadProbability {
                    offset: base + 4 * pos,
                    value: data[pos],
                });
            }
            Ok(Volume::Probability(ProbabilityVolume::from_raw_unchecked(
                header.dims,
                data,
            )))
        }
    }
}

/// Decode an f32 volume without the `[0, 1]` range check (saliency maps).
pub fn decode_real(bytes: &[u8]) -> Result<RealVolume, FormatError> {
    let header = decode_header(bytes)?;
    let raw = payload(bytes, &header)?;
    if header.dtype != DTYPE_F32 {
        return Err(FormatError::UnknownDtype(header.dtype));
    }
    let data: Vec<f32> = f32_values(raw).collect();
    if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
        return Err(FormatError::BadProbability {
            offset: header.payload_offset + 4 * pos,
            value: data[pos],
        });
    }
    Ok(RealVolume::new(header.dims, data).expect("validated"))
}

pub fn read_volume(path: impl AsRef<Path>) -> Result<Volume> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes).map_err(Error::from)
}

pub fn read_real_volume(path: impl AsRef<Path>) -> Result<RealVolume> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_real(&bytes).map_err(Error::from)
}

pub fn write_volume(path: impl AsRef<Path>, volume: &Volume) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode(volume)).map_err(|e| Error::io(path, e))
}
