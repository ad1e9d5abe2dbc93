//! RGB and HSV containers plus the hexcone conversions between them.
//!
//! All enhancement operators work on the value channel of HSV and leave hue
//! and saturation untouched, so the conversions here are the seam every
//! pipeline passes through twice.

use crate::error::{Error, Result};
use crate::plane::Plane;

/// Three equally sized planes holding red, green, and blue in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    r: Plane,
    g: Plane,
    b: Plane,
}

impl RgbImage {
    pub fn new(r: Plane, g: Plane, b: Plane) -> Result<Self> {
        if !r.same_dims(&g) || !r.same_dims(&b) {
            return Err(Error::DimensionMismatch(
                r.width(),
                r.height(),
                g.width().max(b.width()),
                g.height().max(b.height()),
            ));
        }
        Ok(RgbImage { r, g, b })
    }

    pub fn r(&self) -> &Plane {
        &self.r
    }

    pub fn g(&self) -> &Plane {
        &self.g
    }

    pub fn b(&self) -> &Plane {
        &self.b
    }

    pub fn dims(&self) -> (usize, usize) {
        self.r.dims()
    }

    pub fn width(&self) -> usize {
        self.r.width()
    }

    pub fn height(&self) -> usize {
        self.r.height()
    }

    pub fn channels(&self) -> [&Plane; 3] {
        [&self.r, &self.g, &self.b]
    }

    pub fn into_channels(self) -> (Plane, Plane, Plane) {
        (self.r, self.g, self.b)
    }
}

/// Hue (fraction of a turn in `[0, 1)`), saturation, and value planes.
#[derive(Debug, Clone, PartialEq)]
pub struct HsvImage {
    h: Plane,
    s: Plane,
    v: Plane,
}

impl HsvImage {
    pub fn new(h: Plane, s: Plane, v: Plane) -> Result<Self> {
        if !h.same_dims(&s) || !h.same_dims(&v) {
            return Err(Error::DimensionMismatch(
                h.width(),
                h.height(),
                s.width().max(v.width()),
                s.height().max(v.height()),
            ));
        }
        Ok(HsvImage { h, s, v })
    }

    pub fn h(&self) -> &Plane {
        &self.h
    }

    pub fn s(&self) -> &Plane {
        &self.s
    }

    pub fn v(&self) -> &Plane {
        &self.v
    }

    pub fn dims(&self) -> (usize, usize) {
        self.h.dims()
    }

    /// Same hue and saturation with a replacement value plane; this is the
    /// V-only contract every enhancement operator relies on.
    pub fn with_v(&self, v: Plane) -> Result<HsvImage> {
        HsvImage::new(self.h.clone(), self.s.clone(), v)
    }
}

/// Standard hexcone conversion. `V = max(r, g, b)`; `S = 0` when `V = 0`;
/// hue is 0 for achromatic pixels so round trips are deterministic.
pub fn rgb_to_hsv(img: &RgbImage) -> HsvImage {
    let (w, hgt) = img.dims();
    let n = w * hgt;
    let (r, g, b) = (img.r().as_slice(), img.g().as_slice(), img.b().as_slice());
    let mut h = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut v = vec![0.0; n];
    for i in 0..n {
        let (ri, gi, bi) = (r[i], g[i], b[i]);
        let max = ri.max(gi).max(bi);
        let min = ri.min(gi).min(bi);
        let chroma = max - min;
        v[i] = max;
        s[i] = if max == 0.0 { 0.0 } else { chroma / max };
        h[i] = if chroma == 0.0 {
            0.0
        } else if max == ri {
            (((gi - bi) / chroma).rem_euclid(6.0)) / 6.0
        } else if max == gi {
            ((bi - ri) / chroma + 2.0) / 6.0
        } else {
            ((ri - gi) / chroma + 4.0) / 6.0
        };
    }
    HsvImage {
        h: Plane::from_raw(w, hgt, h),
        s: Plane::from_raw(w, hgt, s),
        v: Plane::from_raw(w, hgt, v),
    }
}

/// Inverse hexcone conversion, clamped to `[0, 1]`.
pub fn hsv_to_rgb(img: &HsvImage) -> RgbImage {
    let (w, hgt) = img.dims();
    let n = w * hgt;
    let (h, s, v) = (img.h().as_slice(), img.s().as_slice(), img.v().as_slice());
    let mut r = vec![0.0; n];
    let mut g = vec![0.0; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        let (hi, si, vi) = (h[i], s[i], v[i]);
        let (ri, gi, bi) = if si == 0.0 {
            (vi, vi, vi)
        } else {
            let h6 = (hi * 6.0).rem_euclid(6.0);
            let sector = (h6 as usize).min(5);
            let f = h6 - sector as f64;
            let p = vi * (1.0 - si);
            let q = vi * (1.0 - si * f);
            let t = vi * (1.0 - si * (1.0 - f));
            match sector {
                0 => (vi, t, p),
                1 => (q, vi, p),
                2 => (p, vi, t),
                3 => (p, q, vi),
                4 => (t, p, vi),
                _ => (vi, p, q),
            }
        };
        r[i] = ri.clamp(0.0, 1.0);
        g[i] = gi.clamp(0.0, 1.0);
        b[i] = bi.clamp(0.0, 1.0);
    }
    RgbImage {
        r: Plane::from_raw(w, hgt, r),
        g: Plane::from_raw(w, hgt, g),
        b: Plane::from_raw(w, hgt, b),
    }
}
