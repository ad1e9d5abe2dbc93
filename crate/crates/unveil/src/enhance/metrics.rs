use crate::color::RgbImage;
use crate::error::{Error, Result};

/// Reported for identical images (and as a general ceiling) instead of an
/// unbounded value.
pub const PSNR_CAP_DB: f64 = 99.0;

/// Peak signal-to-noise ratio in dB over all three channels, with intensities
/// in `[0, 1]` so the peak is 1: `10 * log10(1 / MSE)`, capped at
/// [`PSNR_CAP_DB`].
pub fn psnr(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    if a.dims() != b.dims() {
        let (aw, ah) = a.dims();
        let (bw, bh) = b.dims();
        return Err(Error::DimensionMismatch(aw, ah, bw, bh));
    }
    let n = a.width() * a.height() * 3;
    if n == 0 {
        return Err(Error::EmptyPlane);
    }
    let mut total = 0.0;
    for (pa, pb) in a.channels().iter().zip(b.channels().iter()) {
        // Blockwise accumulation, same as the plane statistics.
        total += pa
            .as_slice()
            .chunks(256)
            .zip(pb.as_slice().chunks(256))
            .map(|(ca, cb)| {
                ca.iter()
                    .zip(cb)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
            })
            .sum::<f64>();
    }
    let mse = total / n as f64;
    if mse == 0.0 {
        return Ok(PSNR_CAP_DB);
    }
    Ok((-10.0 * mse.log10()).min(PSNR_CAP_DB))
}
