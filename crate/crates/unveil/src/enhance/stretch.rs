use crate::color::RgbImage;
use crate::error::{Error, Result};
use crate::plane::Plane;

/// Channels whose percentile window is narrower than this pass through
/// unchanged (the stretch would just amplify noise or divide by zero).
const DEGENERATE_RANGE: f64 = 1e-6;

pub(crate) fn validate_bounds(lo: f64, hi: f64) -> Result<()> {
    if !(0.0..=100.0).contains(&lo) || !(0.0..=100.0).contains(&hi) || lo >= hi {
        return Err(Error::InvalidParameter(format!(
            "stretch percentiles ({lo}, {hi}) must satisfy 0 <= lo < hi <= 100"
        )));
    }
    Ok(())
}

/// Linear percentile stretch applied to each RGB channel independently:
/// the `lo` percentile maps to 0 and the `hi` percentile to 1, clamped.
/// Stretching per channel pulls the channel histograms onto a common range,
/// which counteracts global color casts (greenish underwater scenes, orange
/// sand-dust).
pub fn percentile_stretch(img: &RgbImage, lo: f64, hi: f64) -> Result<RgbImage> {
    validate_bounds(lo, hi)?;
    let stretch_plane = |ch: &Plane| -> Result<Plane> {
        let a = ch.percentile(lo)?;
        let b = ch.percentile(hi)?;
        if b - a < DEGENERATE_RANGE {
            return Ok(ch.clone());
        }
        let scale = 1.0 / (b - a);
        Ok(ch.map(|x| ((x - a) * scale).clamp(0.0, 1.0)))
    };
    RgbImage::new(
        stretch_plane(img.r())?,
        stretch_plane(img.g())?,
        stretch_plane(img.b())?,
    )
}
