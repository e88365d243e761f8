//! Dense voxel grids: binary masks, probability maps and saliency stacks.
//!
//! Voxels are stored row-major over the listed dims `(width, height, depth)`,
//! so the last listed axis varies fastest. Planar (2-D) volumes have depth 1
//! but remember their rank so they serialize back with `ndim = 2`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub width: u32,
    pub height: u32,
    pub depth: u32,
    planar: bool,
}

impl Dims {
    pub fn new(width: u32, height: u32, depth: u32) -> Result<Self> {
        Self::checked(width, height, depth, false)
    }

    pub fn planar(width: u32, height: u32) -> Result<Self> {
        Self::checked(width, height, 1, true)
    }

    fn checked(width: u32, height: u32, depth: u32, planar: bool) -> Result<Self> {
        if width == 0 || height == 0 || depth == 0 {
            return Err(Error::InvalidVolume(format!(
                "dims must be positive, got {width}x{height}x{depth}"
            )));
        }
        (width as usize)
            .checked_mul(height as usize)
            .and_then(|v| v.checked_mul(depth as usize))
            .ok_or_else(|| Error::InvalidVolume("voxel count overflows usize".into()))?;
        Ok(Dims {
            width,
            height,
            depth,
            planar,
        })
    }

    pub fn is_planar(&self) -> bool {
        self.planar
    }

    pub fn ndim(&self) -> u8 {
        if self.planar {
            2
        } else {
            3
        }
    }

    /// Dims in on-disk order (2 or 3 entries).
    pub fn as_slice(&self) -> Vec<u32> {
        if self.planar {
            vec![self.width, self.height]
        } else {
            vec![self.width, self.height, self.depth]
        }
    }

    pub fn voxel_count(&self) -> usize {
        self.width as usize * self.height as usize * self.depth as usize
    }

    #[inline]
    pub fn index(&self, x: u32, y: u32, z: u32) -> usize {
        (x as usize * self.height as usize + y as usize) * self.depth as usize + z as usize
    }

    #[inline]
    pub fn coords(&self, index: usize) -> (u32, u32, u32) {
        let d = self.depth as usize;
        let h = self.height as usize;
        let z = index % d;
        let y = (index / d) % h;
        let x = index / (d * h);
        (x as u32, y as u32, z as u32)
    }

    /// Face-adjacent (6-connected) neighbours of a voxel.
    pub fn neighbours(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        let (x, y, z) = self.coords(index);
        let (x, y, z) = (x as i64, y as i64, z as i64);
        const STEPS: [(i64, i64, i64); 6] = [
            (-1, 0, 0),
            (1, 0, 0),
            (0, -1, 0),
            (0, 1, 0),
            (0, 0, -1),
            (0, 0, 1),
        ];
        STEPS.iter().filter_map(move |&(dx, dy, dz)| {
            let (nx, ny, nz) = (x + dx, y + dy, z + dz);
            let inside = (0..self.width as i64).contains(&nx)
                && (0..self.height as i64).contains(&ny)
                && (0..self.depth as i64).contains(&nz);
            inside.then(|| self.index(nx as u32, ny as u32, nz as u32))
        })
    }

    pub(crate) fn ensure_same(&self, other: &Dims) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                left: *self,
                right: *other,
            })
        }
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.planar {
            write!(f, "{}x{}", self.width, self.height)
        } else {
            write!(f, "{}x{}x{}", self.width, self.height, self.depth)
        }
    }
}

/// Parses `WxH` or `WxHxD`, the inverse of `Display`.
impl std::str::FromStr for Dims {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(['x', 'X']).collect();
        let nums = parts
            .iter()
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidVolume(format!("bad dims `{s}`, expected WxH or WxHxD")))?;
        match nums[..] {
            [w, h] => Dims::planar(w, h),
            [w, h, d] => Dims::new(w, h, d),
            _ => Err(Error::InvalidVolume(format!(
                "bad dims `{s}`, expected WxH or WxHxD"
            ))),
        }
    }
}

fn check_len(dims: &Dims, len: usize) -> Result<()> {
    if len != dims.voxel_count() {
        return Err(Error::InvalidVolume(format!(
            "{} voxels supplied for dims {dims} ({} expected)",
            len,
            dims.voxel_count()
        )));
    }
    Ok(())
}

/// Binary label grid; 1 marks foreground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskVolume {
    dims: Dims,
    data: Vec<u8>,
}

impl MaskVolume {
    pub fn new(dims: Dims, data: Vec<u8>) -> Result<Self> {
        check_len(&dims, data.len())?;
        if let Some(pos) = data.iter().position(|&v| v > 1) {
            return Err(Error::InvalidVolume(format!(
                "mask value {} at voxel {pos} is not 0 or 1",
                data[pos]
            )));
        }
        Ok(MaskVolume { dims, data })
    }

    pub fn from_fn(dims: Dims, mut f: impl FnMut(u32, u32, u32) -> bool) -> Self {
        let data = (0..dims.voxel_count())
            .map(|i| {
                let (x, y, z) = dims.coords(i);
                f(x, y, z) as u8
            })
            .collect();
        MaskVolume { dims, data }
    }

    pub fn filled(dims: Dims, value: bool) -> Self {
        MaskVolume {
            dims,
            data: vec![value as u8; dims.voxel_count()],
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, index: usize) -> bool {
        self.data[index] == 1
    }

    pub fn foreground_count(&self) -> usize {
        self.data.iter().filter(|&&v| v == 1).count()
    }

    /// Probability volume holding exactly 0.0 / 1.0.
    pub fn to_probabilities(&self) -> ProbabilityVolume {
        ProbabilityVolume {
            dims: self.dims,
            data: self.data.iter().map(|&v| v as f32).collect(),
        }
    }

    pub(crate) fn from_raw_unchecked(dims: Dims, data: Vec<u8>) -> Self {
        MaskVolume { dims, data }
    }
}

/// Per-voxel foreground probabilities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVolume {
    dims: Dims,
    data: Vec<f32>,
}

/// Threshold used to turn probabilities into a mask; values equal to it
/// count as foreground.
pub const FOREGROUND_THRESHOLD: f32 = 0.5;

impl ProbabilityVolume {
    pub fn new(dims: Dims, data: Vec<f32>) -> Result<Self> {
        check_len(&dims, data.len())?;
        if let Some(pos) = data.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidVolume(format!(
                "probability {} at voxel {pos} is outside [0, 1]",
                data[pos]
            )));
        }
        Ok(ProbabilityVolume { dims, data })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn threshold(&self) -> MaskVolume {
        MaskVolume {
            dims: self.dims,
            data: self
                .data
                .iter()
                .map(|&p| (p >= FOREGROUND_THRESHOLD) as u8)
                .collect(),
        }
    }

    pub(crate) fn from_raw_unchecked(dims: Dims, data: Vec<f32>) -> Self {
        ProbabilityVolume { dims, data }
    }
}

/// Unconstrained real-valued grid, e.g. one saliency map.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVolume {
    dims: Dims,
    data: Vec<f32>,
}

impl RealVolume {
    pub fn new(dims: Dims, data: Vec<f32>) -> Result<Self> {
        check_len(&dims, data.len())?;
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidVolume(format!(
                "non-finite value at voxel {pos}"
            )));
        }
        Ok(RealVolume { dims, data })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }
}

/// Saliency maps of one sample across training checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyStack {
    epochs: Vec<u32>,
    volumes: Vec<RealVolume>,
}

impl SaliencyStack {
    pub fn new(epochs: Vec<u32>, volumes: Vec<RealVolume>) -> Result<Self> {
        if volumes.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "saliency stack needs at least 2 volumes, got {}",
                volumes.len()
            )));
        }
        if epochs.len() != volumes.len() {
            return Err(Error::InvalidVolume(format!(
                "{} epochs for {} volumes",
                epochs.len(),
                volumes.len()
            )));
        }
        if epochs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidVolume(
                "saliency epochs must be strictly increasing".into(),
            ));
        }
        let dims = volumes[0].dims();
        for v in &volumes[1..] {
            dims.ensure_same(&v.dims())?;
        }
        Ok(SaliencyStack { epochs, volumes })
    }

    pub fn epochs(&self) -> &[u32] {
        &self.epochs
    }

    pub fn volumes(&self) -> &[RealVolume] {
        &self.volumes
    }

    pub fn dims(&self) -> Dims {
        self.volumes[0].dims()
    }
}
