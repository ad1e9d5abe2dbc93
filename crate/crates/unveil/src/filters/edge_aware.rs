//! Edge-aware smoothing that approximates a joint spatial/range Gaussian
//! filter (the contract is defined by [`reference::gaussian_range`]).
//!
//! The construction is a splat-blur-slice scheme over range samples: the
//! range axis is sampled on a lattice with spacing tied to `sigma_r`, each
//! sample gets a Gaussian-weighted spatial blur of the weighted image and of
//! the weights, and the output interpolates the normalized slices at every
//! pixel's own value. Blurs use zero padding and the slice ratio
//! renormalizes, which reproduces the reference filter's sum-over-the-image
//! normalization. Slices are accumulated in a fixed order so results are
//! bit-identical regardless of the thread count.
//!
//! [`reference::gaussian_range`]: crate::filters::reference::gaussian_range

use std::collections::BTreeSet;

use crate::color::RgbImage;
use crate::error::{Error, Result};
use crate::filters::gaussian::{horizontal_pass, kernel, vertical_pass, BorderMode};
use crate::parallel;
use crate::plane::Plane;

/// Spatial and range standard deviations of the edge-aware smoother.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeAwareParams {
    /// Spatial standard deviation in pixels.
    pub sigma_s: f64,
    /// Range standard deviation in intensity units.
    pub sigma_r: f64,
}

impl Default for EdgeAwareParams {
    fn default() -> Self {
        EdgeAwareParams {
            sigma_s: 20.0,
            sigma_r: 0.4,
        }
    }
}

impl EdgeAwareParams {
    pub fn new(sigma_s: f64, sigma_r: f64) -> Result<Self> {
        let params = EdgeAwareParams { sigma_s, sigma_r };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.sigma_s) || !positive(self.sigma_r) {
            return Err(Error::InvalidParameter(
                "edge-aware sigmas must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Range-lattice spacing as a fraction of `sigma_r`.
const RANGE_SPACING_FACTOR: f64 = 0.5;
/// Cap on range samples per axis; protects pathologically small `sigma_r`.
const MAX_RANGE_SAMPLES: usize = 65;
/// Spatial kernel truncation, in sigmas. Wider than the public
/// `gaussian_blur` so the slice blurs track the untruncated reference
/// weights closely.
const SPATIAL_EXTENT: f64 = 4.0;

/// Edge-aware smoothing of a single plane. The output is a convex
/// combination of input samples, so every pixel stays within
/// `[min(input), max(input)]`, and a constant plane is returned unchanged.
pub fn edge_aware_smooth(p: &Plane, params: &EdgeAwareParams) -> Plane {
    params.validate().expect("invalid edge-aware parameters");
    let lo = p.min_value();
    let hi = p.max_value();
    let span = hi - lo;
    if span.is_nan() || span <= 0.0 {
        // Constant plane (or empty): exact fixed point.
        return p.clone();
    }
    let (step, samples) = range_lattice(span, params.sigma_r);
    let taps = kernel(params.sigma_s, SPATIAL_EXTENT);
    let inv_2sr = 1.0 / (2.0 * params.sigma_r * params.sigma_r);

    let (w, h) = p.dims();
    let mut out = vec![0.0f64; w * h];
    for k in 0..samples {
        let node = lo + k as f64 * step;
        let weights = p.map(|v| {
            let d = v - node;
            (-d * d * inv_2sr).exp()
        });
        let weighted = weights.zip_map(p, |wv, v| wv * v);
        let den = blur_zero(&weights, &taps);
        let num = blur_zero(&weighted, &taps);
        let (den, num) = (den.as_slice(), num.as_slice());
        let src = p.as_slice();
        parallel::for_each_row_mut(&mut out, w, |y, row| {
            let base = y * w;
            for (x, slot) in row.iter_mut().enumerate() {
                let u = (src[base + x] - lo) / step;
                let hat = 1.0 - (u - k as f64).abs();
                if hat > 0.0 {
                    *slot += hat * num[base + x] / den[base + x].max(f64::MIN_POSITIVE);
                }
            }
        });
    }
    Plane::from_raw(w, h, out)
}

/// RGB edge-aware smoothing with the range distance taken as the Euclidean
/// distance over the three channels and the spatial/range weights shared
/// across them. Range samples live on a 3-D lattice over the occupied color
/// cells; each pixel gathers its eight surrounding samples trilinearly.
pub fn edge_aware_smooth_rgb(img: &RgbImage, params: &EdgeAwareParams) -> RgbImage {
    params.validate().expect("invalid edge-aware parameters");
    let (w, h) = img.dims();
    let n = w * h;
    let channels = [img.r(), img.g(), img.b()];
    let lo = channels.map(|c| c.min_value());
    let hi = channels.map(|c| c.max_value());
    let max_span = (0..3).map(|c| hi[c] - lo[c]).fold(0.0, f64::max);
    if max_span.is_nan() || max_span <= 0.0 {
        return img.clone();
    }
    let (step, _) = range_lattice(max_span, params.sigma_r);
    let counts: [usize; 3] = [0, 1, 2].map(|c| {
        let span = hi[c] - lo[c];
        ((span / step).ceil() as usize + 1).max(2)
    });

    // Per-pixel lattice coordinates, and the set of lattice nodes that carry
    // nonzero trilinear weight for at least one pixel.
    let coord = |c: usize, i: usize| (channels[c].as_slice()[i] - lo[c]) / step;
    let mut nodes: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for i in 0..n {
        let mut axis_nodes: [[(usize, f64); 2]; 3] = [[(0, 0.0); 2]; 3];
        for c in 0..3 {
            let u = coord(c, i);
            let j = (u.floor() as usize).min(counts[c] - 2);
            let t = u - j as f64;
            axis_nodes[c] = [(j, 1.0 - t), (j + 1, t)];
        }
        for &(ir, wr) in &axis_nodes[0] {
            if wr <= 0.0 {
                continue;
            }
            for &(ig, wg) in &axis_nodes[1] {
                if wg <= 0.0 {
                    continue;
                }
                for &(ib, wb) in &axis_nodes[2] {
                    if wb > 0.0 {
                        nodes.insert((ir, ig, ib));
                    }
                }
            }
        }
    }

    let taps = kernel(params.sigma_s, SPATIAL_EXTENT);
    let inv_2sr = 1.0 / (2.0 * params.sigma_r * params.sigma_r);
    let mut out = [vec![0.0f64; n], vec![0.0f64; n], vec![0.0f64; n]];
    for &(ir, ig, ib) in &nodes {
        let center = [
            lo[0] + ir as f64 * step,
            lo[1] + ig as f64 * step,
            lo[2] + ib as f64 * step,
        ];
        let mut wdata = vec![0.0f64; n];
        for (i, wv) in wdata.iter_mut().enumerate() {
            let d2 = (0..3)
                .map(|c| {
                    let d = channels[c].as_slice()[i] - center[c];
                    d * d
                })
                .sum::<f64>();
            *wv = (-d2 * inv_2sr).exp();
        }
        let weights = Plane::from_raw(w, h, wdata);
        let den = blur_zero(&weights, &taps);
        let node_idx = [ir, ig, ib];
        for c in 0..3 {
            let weighted = weights.zip_map(channels[c], |wv, v| wv * v);
            let num = blur_zero(&weighted, &taps);
            let (den_s, num_s) = (den.as_slice(), num.as_slice());
            parallel::for_each_row_mut(&mut out[c], w, |y, row| {
                let base = y * w;
                for (x, slot) in row.iter_mut().enumerate() {
                    let i = base + x;
                    let mut t = 1.0;
                    for (axis, &node_j) in node_idx.iter().enumerate() {
                        t *= (1.0 - (coord(axis, i) - node_j as f64).abs()).max(0.0);
                    }
                    if t > 0.0 {
                        *slot += t * num_s[i] / den_s[i].max(f64::MIN_POSITIVE);
                    }
                }
            });
        }
    }
    let [r, g, b] = out;
    RgbImage::new(
        Plane::from_raw(w, h, r),
        Plane::from_raw(w, h, g),
        Plane::from_raw(w, h, b),
    )
    .expect("channels share dimensions")
}

/// Lattice spacing and sample count covering a value span.
fn range_lattice(span: f64, sigma_r: f64) -> (f64, usize) {
    let mut step = sigma_r * RANGE_SPACING_FACTOR;
    let mut samples = (span / step).ceil() as usize + 1;
    if samples > MAX_RANGE_SAMPLES {
        samples = MAX_RANGE_SAMPLES;
        step = span / (samples - 1) as f64;
    }
    (step, samples.max(2))
}

fn blur_zero(p: &Plane, taps: &[f64]) -> Plane {
    vertical_pass(
        &horizontal_pass(p, taps, BorderMode::Zero),
        taps,
        BorderMode::Zero,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::reference;

    fn rmse(a: &Plane, b: &Plane) -> f64 {
        let se: f64 = a
            .as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        (se / a.len() as f64).sqrt()
    }

    fn random_plane(w: usize, h: usize, seed: u64) -> Plane {
        let mut state = seed | 1;
        let data: Vec<f64> = (0..w * h)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64
            })
            .collect();
        Plane::from_vec(w, h, data).unwrap()
    }

    fn step_edge(w: usize, h: usize, left: f64, right: f64) -> Plane {
        let mut p = Plane::new(w, h);
        for y in 0..h {
            for x in 0..w {
                p.set(x, y, if x < w / 2 { left } else { right });
            }
        }
        p
    }

    #[test]
    fn constant_plane_is_exact() {
        let p = Plane::filled(16, 16, 0.71);
        let out = edge_aware_smooth(&p, &EdgeAwareParams::default());
        for &v in out.as_slice() {
            assert_eq!(v, 0.71);
        }
    }

    #[test]
    fn huge_sigma_r_degenerates_to_spatial_gaussian() {
        let p = random_plane(32, 32, 31);
        let params = EdgeAwareParams {
            sigma_s: 3.0,
            sigma_r: 100.0,
        };
        let out = edge_aware_smooth(&p, &params);
        // With no effective range term the filter collapses to pure spatial
        // Gaussian smoothing. Direct oracle: untruncated spatial weights
        // normalized over the image.
        let (w, h) = p.dims();
        let mut spatial = Plane::new(w, h);
        for y in 0..h {
            for x in 0..w {
                let (mut num, mut den) = (0.0, 0.0);
                for sy in 0..h {
                    for sx in 0..w {
                        let d2 = (sx as f64 - x as f64).powi(2) + (sy as f64 - y as f64).powi(2);
                        let wgt = (-d2 / (2.0 * params.sigma_s * params.sigma_s)).exp();
                        num += wgt * p.get(sx, sy);
                        den += wgt;
                    }
                }
                spatial.set(x, y, num / den);
            }
        }
        assert!(rmse(&out, &spatial) < 0.01, "rmse {}", rmse(&out, &spatial));
    }

    #[test]
    fn step_edge_tracks_oracle_and_preserves_contrast() {
        let p = step_edge(32, 32, 0.2, 0.8);
        let params = EdgeAwareParams {
            sigma_s: 4.0,
            sigma_r: 0.1,
        };
        let out = edge_aware_smooth(&p, &params);
        let oracle = reference::gaussian_range(&p, &params).unwrap();
        assert!(rmse(&out, &oracle) < 0.03, "rmse {}", rmse(&out, &oracle));
        // Contrast across the edge keeps at least 80% of its input value.
        let y = 16;
        let contrast = out.get(17, y) - out.get(14, y);
        assert!(contrast >= 0.8 * 0.6, "contrast {contrast}");
    }

    #[test]
    fn output_stays_within_input_range() {
        let p = random_plane(24, 24, 5);
        let (lo, hi) = (p.min_value(), p.max_value());
        for (ss, sr) in [(2.0, 0.1), (4.0, 0.4), (8.0, 0.2)] {
            let out = edge_aware_smooth(
                &p,
                &EdgeAwareParams {
                    sigma_s: ss,
                    sigma_r: sr,
                },
            );
            for &v in out.as_slice() {
                assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn rgb_constant_image_is_exact() {
        let img = RgbImage::new(
            Plane::filled(8, 8, 0.2),
            Plane::filled(8, 8, 0.5),
            Plane::filled(8, 8, 0.9),
        )
        .unwrap();
        let out = edge_aware_smooth_rgb(&img, &EdgeAwareParams::default());
        assert_eq!(&out, &img);
    }

    #[test]
    fn rgb_tracks_oracle_on_color_edge() {
        // Two-color image with a soft ramp; range distance is joint over the
        // channels so the oracle must see the colors as distant.
        let (w, h) = (24, 24);
        let mut r = Plane::new(w, h);
        let mut g = Plane::new(w, h);
        let mut b = Plane::new(w, h);
        let mut state = 13u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for y in 0..h {
            for x in 0..w {
                let base = if x < w / 2 { 0.25 } else { 0.7 };
                let noise = 0.05 * (next() - 0.5);
                r.set(x, y, (base + noise).clamp(0.0, 1.0));
                g.set(x, y, (0.9 - base + noise).clamp(0.0, 1.0));
                b.set(x, y, (base * 0.5 + noise).clamp(0.0, 1.0));
            }
        }
        let img = RgbImage::new(r, g, b).unwrap();
        for sr in [0.2, 0.4] {
            let params = EdgeAwareParams {
                sigma_s: 3.0,
                sigma_r: sr,
            };
            let out = edge_aware_smooth_rgb(&img, &params);
            let oracle = reference::gaussian_range_rgb(&img, &params).unwrap();
            let err = [
                rmse(out.r(), oracle.r()),
                rmse(out.g(), oracle.g()),
                rmse(out.b(), oracle.b()),
            ]
            .into_iter()
            .fold(0.0, f64::max);
            assert!(err < 0.03, "rmse {err} at sigma_r {sr}");
        }
    }
}
