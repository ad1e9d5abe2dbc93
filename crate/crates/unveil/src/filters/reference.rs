//! Brute-force reference filters.
//!
//! These are deliberately naive O(n * window) or O(n^2) implementations that
//! define the ground truth the accelerated filters are validated against.
//! They share no code with the fast paths. `gaussian_range` doubles as the
//! contract for [`edge_aware_smooth`](crate::filters::edge_aware_smooth) and
//! guards itself against images where the quadratic cost would be
//! unreasonable.

use crate::color::RgbImage;
use crate::error::{Error, Result};
use crate::filters::{EdgeAwareParams, GuidedFilterParams};
use crate::plane::Plane;

/// Largest edge length `gaussian_range` accepts.
pub const GAUSSIAN_RANGE_MAX_DIM: usize = 64;

/// Sliding-window mean with partial-window normalization.
pub fn box_filter(p: &Plane, radius: usize) -> Plane {
    let (w, h) = p.dims();
    let mut out = Plane::new(w, h);
    for y in 0..h {
        for x in 0..w {
            let y0 = y.saturating_sub(radius);
            let y1 = (y + radius + 1).min(h);
            let x0 = x.saturating_sub(radius);
            let x1 = (x + radius + 1).min(w);
            let mut sum = 0.0;
            for wy in y0..y1 {
                for wx in x0..x1 {
                    sum += p.get(wx, wy);
                }
            }
            out.set(x, y, sum / ((y1 - y0) * (x1 - x0)) as f64);
        }
    }
    out
}

/// Direct (non-separable) 2-D Gaussian convolution, truncated at `3*sigma`
/// over a square support, renormalized, replicate borders.
pub fn gaussian_blur(p: &Plane, sigma: f64) -> Plane {
    let (w, h) = p.dims();
    let radius = (3.0 * sigma).floor() as isize;
    let size = (2 * radius + 1) as usize;
    let mut kernel = vec![0.0f64; size * size];
    let mut sum = 0.0;
    for dy in -radius..=radius {
        for dx in -radius..=radius {
            let v = (-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp();
            kernel[((dy + radius) * (2 * radius + 1) + dx + radius) as usize] = v;
            sum += v;
        }
    }
    for k in kernel.iter_mut() {
        *k /= sum;
    }
    let mut out = Plane::new(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for dy in -radius..=radius {
                for dx in -radius..=radius {
                    let sx = (x as isize + dx).clamp(0, w as isize - 1) as usize;
                    let sy = (y as isize + dy).clamp(0, h as isize - 1) as usize;
                    acc += kernel[((dy + radius) * (2 * radius + 1) + dx + radius) as usize]
                        * p.get(sx, sy);
                }
            }
            out.set(x, y, acc);
        }
    }
    out
}

/// Per-window guided filter evaluated without box-filter acceleration: each
/// window computes its own means, variance, and linear coefficients, and each
/// pixel averages the coefficients of every window covering it.
pub fn guided_filter(input: &Plane, guide: &Plane, params: &GuidedFilterParams) -> Result<Plane> {
    if !input.same_dims(guide) {
        return Err(Error::DimensionMismatch(
            input.width(),
            input.height(),
            guide.width(),
            guide.height(),
        ));
    }
    let (w, h) = input.dims();
    let r = params.radius;
    let mut a = Plane::new(w, h);
    let mut b = Plane::new(w, h);
    for cy in 0..h {
        for cx in 0..w {
            let y0 = cy.saturating_sub(r);
            let y1 = (cy + r + 1).min(h);
            let x0 = cx.saturating_sub(r);
            let x1 = (cx + r + 1).min(w);
            let count = ((y1 - y0) * (x1 - x0)) as f64;
            let (mut sum_g, mut sum_i, mut sum_gg, mut sum_gi) = (0.0, 0.0, 0.0, 0.0);
            for wy in y0..y1 {
                for wx in x0..x1 {
                    let gv = guide.get(wx, wy);
                    let iv = input.get(wx, wy);
                    sum_g += gv;
                    sum_i += iv;
                    sum_gg += gv * gv;
                    sum_gi += gv * iv;
                }
            }
            let mean_g = sum_g / count;
            let mean_i = sum_i / count;
            let var_g = sum_gg / count - mean_g * mean_g;
            let cov_gi = sum_gi / count - mean_g * mean_i;
            let ak = cov_gi / (var_g + params.eps);
            a.set(cx, cy, ak);
            b.set(cx, cy, mean_i - ak * mean_g);
        }
    }
    let mut out = Plane::new(w, h);
    for y in 0..h {
        for x in 0..w {
            let y0 = y.saturating_sub(r);
            let y1 = (y + r + 1).min(h);
            let x0 = x.saturating_sub(r);
            let x1 = (x + r + 1).min(w);
            let count = ((y1 - y0) * (x1 - x0)) as f64;
            let (mut sum_a, mut sum_b) = (0.0, 0.0);
            for wy in y0..y1 {
                for wx in x0..x1 {
                    sum_a += a.get(wx, wy);
                    sum_b += b.get(wx, wy);
                }
            }
            out.set(x, y, (sum_a / count) * guide.get(x, y) + sum_b / count);
        }
    }
    Ok(out)
}

/// Exact joint spatial/range Gaussian filter on a single plane:
/// `out(i) = sum_j w(i,j) in(j) / sum_j w(i,j)` with
/// `w(i,j) = exp(-|pos_i - pos_j|^2 / (2 sigma_s^2))
///         * exp(-(val_i - val_j)^2 / (2 sigma_r^2))`
/// summed over the whole image (no truncation, no padding).
pub fn gaussian_range(p: &Plane, params: &EdgeAwareParams) -> Result<Plane> {
    guard_size(p.dims())?;
    let (w, h) = p.dims();
    let inv_2ss = 1.0 / (2.0 * params.sigma_s * params.sigma_s);
    let inv_2sr = 1.0 / (2.0 * params.sigma_r * params.sigma_r);
    let mut out = Plane::new(w, h);
    for y in 0..h {
        for x in 0..w {
            let center = p.get(x, y);
            let mut num = 0.0;
            let mut den = 0.0;
            for sy in 0..h {
                for sx in 0..w {
                    let d2 = (sx as f64 - x as f64).powi(2) + (sy as f64 - y as f64).powi(2);
                    let val = p.get(sx, sy);
                    let dr = val - center;
                    let wgt = (-d2 * inv_2ss).exp() * (-dr * dr * inv_2sr).exp();
                    num += wgt * val;
                    den += wgt;
                }
            }
            out.set(x, y, num / den);
        }
    }
    Ok(out)
}

/// RGB variant of [`gaussian_range`]: the range distance is the Euclidean
/// distance over the three channels and the weights are shared across them.
pub fn gaussian_range_rgb(img: &RgbImage, params: &EdgeAwareParams) -> Result<RgbImage> {
    guard_size(img.dims())?;
    let (w, h) = img.dims();
    let inv_2ss = 1.0 / (2.0 * params.sigma_s * params.sigma_s);
    let inv_2sr = 1.0 / (2.0 * params.sigma_r * params.sigma_r);
    let (r, g, b) = (img.r(), img.g(), img.b());
    let mut out_r = Plane::new(w, h);
    let mut out_g = Plane::new(w, h);
    let mut out_b = Plane::new(w, h);
    for y in 0..h {
        for x in 0..w {
            let (cr, cg, cb) = (r.get(x, y), g.get(x, y), b.get(x, y));
            let (mut nr, mut ng, mut nb, mut den) = (0.0, 0.0, 0.0, 0.0);
            for sy in 0..h {
                for sx in 0..w {
                    let d2 = (sx as f64 - x as f64).powi(2) + (sy as f64 - y as f64).powi(2);
                    let (vr, vg, vb) = (r.get(sx, sy), g.get(sx, sy), b.get(sx, sy));
                    let dr2 = (vr - cr).powi(2) + (vg - cg).powi(2) + (vb - cb).powi(2);
                    let wgt = (-d2 * inv_2ss).exp() * (-dr2 * inv_2sr).exp();
                    nr += wgt * vr;
                    ng += wgt * vg;
                    nb += wgt * vb;
                    den += wgt;
                }
            }
            out_r.set(x, y, nr / den);
            out_g.set(x, y, ng / den);
            out_b.set(x, y, nb / den);
        }
    }
    RgbImage::new(out_r, out_g, out_b)
}

fn guard_size((w, h): (usize, usize)) -> Result<()> {
    if w > GAUSSIAN_RANGE_MAX_DIM || h > GAUSSIAN_RANGE_MAX_DIM {
        return Err(Error::SizeGuard(w, h, GAUSSIAN_RANGE_MAX_DIM));
    }
    Ok(())
}
