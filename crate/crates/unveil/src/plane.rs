use crate::error::{Error, Result};
use crate::parallel;

/// A single-channel image: `width * height` samples stored row-major.
///
/// The enhancement operators keep samples in `[0, 1]` and clamp where their
/// contract says so. Diagnostic operations may hold values outside that range
/// (or non-finite entries, which they flag) so the container itself does not
/// police the invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Plane {
    /// All-zero plane.
    pub fn new(width: usize, height: usize) -> Self {
        Self::filled(width, height, 0.0)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Plane {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        let expected = width
            .checked_mul(height)
            .ok_or(Error::DimensionOverflow {
                width: width as u64,
                height: height as u64,
            })?;
        if data.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "plane data length {} does not match {}x{}",
                data.len(),
                width,
                height
            )));
        }
        Ok(Plane {
            width,
            height,
            data,
        })
    }

    /// Internal constructor for buffers whose length is known to match.
    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Plane {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.data[y * self.width + x] = value;
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn same_dims(&self, other: &Plane) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn map(&self, f: impl Fn(f64) -> f64 + Sync) -> Plane {
        Plane::from_raw(self.width, self.height, parallel::map(&self.data, f))
    }

    pub(crate) fn zip_map(&self, other: &Plane, f: impl Fn(f64, f64) -> f64 + Sync) -> Plane {
        debug_assert!(self.same_dims(other));
        Plane::from_raw(
            self.width,
            self.height,
            parallel::zip_map(&self.data, &other.data, f),
        )
    }

    /// Elementwise clamp to `[0, 1]`.
    pub fn clamp01(&self) -> Plane {
        self.map(|x| x.clamp(0.0, 1.0))
    }

    pub fn min_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Arithmetic mean of all samples (blockwise summation keeps the rounding
    /// error well under 1e-12 for the image sizes this crate targets).
    pub fn mean_value(&self) -> Result<f64> {
        if self.data.is_empty() {
            return Err(Error::EmptyPlane);
        }
        Ok(block_sum(&self.data) / self.data.len() as f64)
    }

    /// Nearest-rank percentile: sort ascending and take the element at rank
    /// `ceil(q/100 * n)` (1-based, clamped to `[1, n]`); `q = 0` returns the
    /// minimum.
    pub fn percentile(&self, q: f64) -> Result<f64> {
        if self.data.is_empty() {
            return Err(Error::EmptyPlane);
        }
        if !(0.0..=100.0).contains(&q) {
            return Err(Error::InvalidParameter(format!(
                "percentile {q} outside [0, 100]"
            )));
        }
        let mut sorted = self.data.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        let n = sorted.len();
        let rank = ((q * n as f64) / 100.0).ceil() as usize;
        Ok(sorted[rank.clamp(1, n) - 1])
    }
}

/// Two-level blockwise sum.
fn block_sum(data: &[f64]) -> f64 {
    data.chunks(256).map(|c| c.iter().sum::<f64>()).sum()
}
