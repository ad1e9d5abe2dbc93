//! Low-light brightening and its companions.
//!
//! The forward degradation model darkens an image by multiplying the value
//! channel with a power of its own edge-preserving smoothing,
//! `v * f(v)^p`; brightening approximately reverses it with
//! `v / (f(v)^p + r)` where `r` is a small regularizer that keeps the
//! division bounded. Both operate on V only and leave hue and saturation
//! untouched.

use crate::color::{hsv_to_rgb, rgb_to_hsv, RgbImage};
use crate::error::{Error, Result};
use crate::filters::{guided_filter, GuidedFilterParams};
use crate::plane::Plane;

/// Parameters of the brightening operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlieParams {
    /// Gamma exponent in `(0, 1]`; ignored when `auto_p` is set.
    pub p: f64,
    /// Non-negative regularizer guarding the division.
    pub r: f64,
    /// Select the exponent from the mean of the input value channel.
    pub auto_p: bool,
}

impl Default for LlieParams {
    fn default() -> Self {
        LlieParams {
            p: 1.0,
            r: 0.01,
            auto_p: true,
        }
    }
}

impl LlieParams {
    pub fn validate(&self) -> Result<()> {
        if self.p.is_nan() || self.p <= 0.0 || self.p > 1.0 {
            return Err(Error::InvalidParameter(
                "brightening exponent p must lie in (0, 1]".into(),
            ));
        }
        if self.r.is_nan() || self.r < 0.0 {
            return Err(Error::InvalidParameter(
                "regularizer r must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Exponent selection from the mean value channel: very dark images
/// (mean <= 0.05) take `p = 1.0`, moderately dark ones (mean >= 0.30) take
/// `p = 0.8`, with a linear ramp in between. Continuous and non-increasing.
pub fn auto_p(mean_v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mean_v) {
        return Err(Error::InvalidParameter(format!(
            "mean value {mean_v} outside [0, 1]"
        )));
    }
    Ok(if mean_v <= 0.05 {
        1.0
    } else if mean_v >= 0.30 {
        0.8
    } else {
        1.0 - 0.2 * (mean_v - 0.05) / 0.25
    })
}

/// Brightens a low-light image: `v' = v / (f(v)^p + r)` on the HSV value
/// channel with `f` the self-guided filter, clamped to `[0, 1]`.
pub fn brighten(img: &RgbImage, llie: &LlieParams, gf: &GuidedFilterParams) -> Result<RgbImage> {
    llie.validate()?;
    gf.validate()?;
    let hsv = rgb_to_hsv(img);
    let p = if llie.auto_p {
        auto_p(hsv.v().mean_value()?)?
    } else {
        llie.p
    };
    let r = llie.r;
    let filtered = guided_filter(hsv.v(), hsv.v(), gf)?;
    let v = hsv.v().zip_map(&filtered, |v, f| {
        let den = f.max(0.0).powf(p) + r;
        let out = v / den;
        if out.is_finite() {
            out.clamp(0.0, 1.0)
        } else {
            0.0
        }
    });
    Ok(hsv_to_rgb(&hsv.with_v(v)?))
}

/// Forward darkening model `v' = v * f(v)^p`, clamped; hue and saturation
/// pass through.
pub fn simulate_darkening(img: &RgbImage, p: f64, gf: &GuidedFilterParams) -> Result<RgbImage> {
    if p.is_nan() || p <= 0.0 || p > 1.0 {
        return Err(Error::InvalidParameter(
            "darkening exponent p must lie in (0, 1]".into(),
        ));
    }
    gf.validate()?;
    let hsv = rgb_to_hsv(img);
    let filtered = guided_filter(hsv.v(), hsv.v(), gf)?;
    let v = hsv
        .v()
        .zip_map(&filtered, |v, f| (v * f.max(0.0).powf(p)).clamp(0.0, 1.0));
    Ok(hsv_to_rgb(&hsv.with_v(v)?))
}

/// Base/detail split of a value plane under the smoothing filter `f`:
/// with `b = f(v)` and `d = v - b`, returns `b^(1-p)` (the gamma-corrected
/// base) and `d / b^p` (the amplified detail).
///
/// This is a diagnostic decomposition: where `b` reaches zero the detail
/// term is not finite. Such entries are counted in `non_finite` instead of
/// being masked, so callers can see exactly where the identity degenerates.
#[derive(Debug, Clone)]
pub struct BaseDetail {
    pub base_term: Plane,
    pub detail_term: Plane,
    /// Number of non-finite entries across both planes.
    pub non_finite: usize,
}

pub fn base_detail_decompose(
    v: &Plane,
    gf: &GuidedFilterParams,
    p: f64,
) -> Result<BaseDetail> {
    if p.is_nan() || p <= 0.0 || p > 1.0 {
        return Err(Error::InvalidParameter(
            "decomposition exponent p must lie in (0, 1]".into(),
        ));
    }
    let b = guided_filter(v, v, gf)?;
    let base_term = b.map(|b| b.powf(1.0 - p));
    let detail_term = v.zip_map(&b, |v, b| (v - b) / b.powf(p));
    let non_finite = base_term
        .as_slice()
        .iter()
        .chain(detail_term.as_slice())
        .filter(|x| !x.is_finite())
        .count();
    Ok(BaseDetail {
        base_term,
        detail_term,
        non_finite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::RgbImage;

    fn constant_gray(w: usize, h: usize, c: f64) -> RgbImage {
        RgbImage::new(
            Plane::filled(w, h, c),
            Plane::filled(w, h, c),
            Plane::filled(w, h, c),
        )
        .unwrap()
    }

    #[test]
    fn auto_p_anchor_points() {
        assert_eq!(auto_p(0.05).unwrap(), 1.0);
        assert_eq!(auto_p(0.30).unwrap(), 0.8);
        assert!((auto_p(0.175).unwrap() - 0.9).abs() < 1e-12);
        assert_eq!(auto_p(0.0).unwrap(), 1.0);
        assert_eq!(auto_p(1.0).unwrap(), 0.8);
        assert!(auto_p(-0.1).is_err());
        assert!(auto_p(1.1).is_err());
    }

    #[test]
    fn auto_p_is_continuous_and_non_increasing() {
        let mut prev = auto_p(0.0).unwrap();
        for i in 1..=1000 {
            let m = i as f64 / 1000.0;
            let p = auto_p(m).unwrap();
            assert!(p <= prev + 1e-12);
            assert!((0.8..=1.0).contains(&p));
            // Continuity: neighboring samples stay within the ramp slope.
            assert!((p - prev).abs() <= 0.2 / 0.25 * 0.001 + 1e-12);
            prev = p;
        }
    }

    #[test]
    fn brighten_constant_gray() {
        // Guided filter fixes constants, so V = 0.25 / (0.25 + 0.01).
        let img = constant_gray(16, 16, 0.25);
        let params = LlieParams {
            p: 1.0,
            r: 0.01,
            auto_p: false,
        };
        let out = brighten(&img, &params, &GuidedFilterParams::default()).unwrap();
        let expect = 0.25 / 0.26;
        for &v in out.r().as_slice() {
            assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
        }
    }

    #[test]
    fn brighten_white_with_zero_r_is_identity() {
        let img = constant_gray(8, 8, 1.0);
        let params = LlieParams {
            p: 1.0,
            r: 0.0,
            auto_p: false,
        };
        let out = brighten(&img, &params, &GuidedFilterParams::default()).unwrap();
        for &v in out.g().as_slice() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn darkening_squares_constant_values() {
        let img = constant_gray(8, 8, 0.5);
        let out = simulate_darkening(&img, 1.0, &GuidedFilterParams::default()).unwrap();
        for &v in out.b().as_slice() {
            assert!((v - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn tiny_exponent_barely_darkens() {
        let img = constant_gray(8, 8, 0.73);
        let out = simulate_darkening(&img, 1e-12, &GuidedFilterParams::default()).unwrap();
        for &v in out.r().as_slice() {
            assert!((v - 0.73).abs() < 1e-9);
        }
    }

    #[test]
    fn darkening_ratio_increases_with_brightness() {
        // For constants the output/input ratio is c^p: brighter images dim
        // less.
        let gf = GuidedFilterParams::default();
        let mut prev_ratio = 0.0;
        for c in [0.2, 0.4, 0.6, 0.8] {
            let img = constant_gray(4, 4, c);
            let out = simulate_darkening(&img, 0.9, &gf).unwrap();
            let ratio = out.r().get(0, 0) / c;
            assert!(ratio > prev_ratio);
            prev_ratio = ratio;
        }
    }

    #[test]
    fn decompose_constant_with_unit_exponent() {
        let v = Plane::filled(12, 12, 0.6);
        let out = base_detail_decompose(&v, &GuidedFilterParams::default(), 1.0).unwrap();
        for &b in out.base_term.as_slice() {
            assert!((b - 1.0).abs() < 1e-12); // c^0
        }
        for &d in out.detail_term.as_slice() {
            assert!(d.abs() < 1e-12);
        }
        assert_eq!(out.non_finite, 0);
    }

    #[test]
    fn decompose_small_exponent_recovers_plain_split() {
        // p -> 0: base term -> b, detail term -> d, and their sum is v.
        let mut state = 77u64;
        let data: Vec<f64> = (0..16 * 16)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                0.2 + 0.6 * ((state >> 11) as f64 / (1u64 << 53) as f64)
            })
            .collect();
        let v = Plane::from_vec(16, 16, data).unwrap();
        let gf = GuidedFilterParams::default();
        let out = base_detail_decompose(&v, &gf, 1e-14).unwrap();
        let b = guided_filter(&v, &v, &gf).unwrap();
        for i in 0..v.len() {
            let sum = out.base_term.as_slice()[i] + out.detail_term.as_slice()[i];
            assert!((sum - v.as_slice()[i]).abs() < 1e-12);
            assert!((out.base_term.as_slice()[i] - b.as_slice()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn decompose_flags_non_finite_entries() {
        // A zero region forces b = 0 in its interior, where d / b^p blows up.
        let mut v = Plane::new(16, 16);
        for y in 8..16 {
            for x in 0..16 {
                v.set(x, y, 0.8);
            }
        }
        let out = base_detail_decompose(&v, &GuidedFilterParams::default(), 0.9).unwrap();
        assert!(out.non_finite > 0);
    }
}
