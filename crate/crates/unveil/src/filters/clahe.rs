//! Contrast-limited adaptive histogram equalization.
//!
//! The plane is divided into a grid of tiles; each tile builds an integer
//! histogram, clips every bin at a fraction of the tile's pixel count, and
//! redistributes the clipped excess uniformly over all bins in a single pass
//! (no iterative re-clipping). The per-tile mapping is the normalized CDF,
//! and every output pixel blends the four surrounding tile mappings
//! bilinearly, with boundary tiles extended by replication. A tile whose raw
//! histogram sits entirely in one bin keeps the identity mapping, so constant
//! regions pass through untouched.

use crate::error::{Error, Result};
use crate::parallel;
use crate::plane::Plane;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaheParams {
    pub tiles_x: usize,
    pub tiles_y: usize,
    /// Maximum fraction of a tile's pixels a single histogram bin may hold
    /// before the excess is redistributed.
    pub clip_limit: f64,
    pub bins: usize,
}

impl Default for ClaheParams {
    fn default() -> Self {
        ClaheParams {
            tiles_x: 8,
            tiles_y: 8,
            clip_limit: 0.01,
            bins: 256,
        }
    }
}

impl ClaheParams {
    pub fn validate(&self) -> Result<()> {
        if self.tiles_x < 1 || self.tiles_y < 1 {
            return Err(Error::InvalidParameter(
                "clahe needs at least one tile per axis".into(),
            ));
        }
        if self.bins < 2 {
            return Err(Error::InvalidParameter("clahe needs at least 2 bins".into()));
        }
        if self.clip_limit.is_nan() || self.clip_limit <= 0.0 || self.clip_limit > 1.0 {
            return Err(Error::InvalidParameter(
                "clahe clip limit must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Per-tile equalization mapping: either the identity (degenerate tiles) or
/// a normalized CDF lookup over `bins` levels.
enum TileMap {
    Identity,
    Cdf(Vec<f64>),
}

impl TileMap {
    #[inline]
    fn eval(&self, value: f64, bins: usize) -> f64 {
        match self {
            TileMap::Identity => value,
            TileMap::Cdf(cdf) => cdf[bin_of(value, bins)],
        }
    }
}

#[inline]
fn bin_of(value: f64, bins: usize) -> usize {
    ((value.max(0.0) * bins as f64) as usize).min(bins - 1)
}

/// Histogram clip and single-pass uniform redistribution over all bins
/// (including the clipped ones). Integer arithmetic keeps the total mass
/// exactly equal to the tile's pixel count: each bin gains
/// `excess / bins`, and the first `excess % bins` bins take one extra unit.
pub fn clip_and_redistribute(hist: &mut [u64], clip_limit: f64, pixel_count: u64) {
    let limit = ((clip_limit * pixel_count as f64).floor() as u64).max(1);
    let mut excess = 0u64;
    for h in hist.iter_mut() {
        if *h > limit {
            excess += *h - limit;
            *h = limit;
        }
    }
    let share = excess / hist.len() as u64;
    let remainder = (excess % hist.len() as u64) as usize;
    for (i, h) in hist.iter_mut().enumerate() {
        *h += share + u64::from(i < remainder);
    }
}

pub fn clahe(p: &Plane, params: &ClaheParams) -> Plane {
    params.validate().expect("invalid CLAHE parameters");
    let (w, h) = p.dims();
    if w == 0 || h == 0 {
        return p.clone();
    }
    let tiles_x = params.tiles_x;
    let tiles_y = params.tiles_y;
    let bins = params.bins;

    // Tile boundaries partition the image with near-equal integer extents.
    let x_bound = |t: usize| t * w / tiles_x;
    let y_bound = |t: usize| t * h / tiles_y;

    let mut maps: Vec<TileMap> = Vec::with_capacity(tiles_x * tiles_y);
    for ty in 0..tiles_y {
        for tx in 0..tiles_x {
            let (x0, x1) = (x_bound(tx), x_bound(tx + 1));
            let (y0, y1) = (y_bound(ty), y_bound(ty + 1));
            let count = ((x1 - x0) * (y1 - y0)) as u64;
            if count == 0 {
                maps.push(TileMap::Identity);
                continue;
            }
            let mut hist = vec![0u64; bins];
            for y in y0..y1 {
                for &v in &p.row(y)[x0..x1] {
                    hist[bin_of(v, bins)] += 1;
                }
            }
            // Degenerate tile: all mass in a single bin.
            if hist.contains(&count) {
                maps.push(TileMap::Identity);
                continue;
            }
            clip_and_redistribute(&mut hist, params.clip_limit, count);
            let mut cdf = Vec::with_capacity(bins);
            let mut run = 0u64;
            for &c in &hist {
                run += c;
                cdf.push(run as f64 / count as f64);
            }
            maps.push(TileMap::Cdf(cdf));
        }
    }

    // Tile centers in pixel coordinates (mean index of the tile's pixels).
    let centers_x: Vec<f64> = (0..tiles_x)
        .map(|t| (x_bound(t) + x_bound(t + 1)) as f64 / 2.0 - 0.5)
        .collect();
    let centers_y: Vec<f64> = (0..tiles_y)
        .map(|t| (y_bound(t) + y_bound(t + 1)) as f64 / 2.0 - 0.5)
        .collect();
    let lut_x: Vec<(usize, usize, f64)> = (0..w).map(|x| bracket(&centers_x, x as f64)).collect();
    let lut_y: Vec<(usize, usize, f64)> = (0..h).map(|y| bracket(&centers_y, y as f64)).collect();

    let mut out = vec![0.0f64; w * h];
    parallel::for_each_row_mut(&mut out, w, |y, row| {
        let (t0y, t1y, wy) = lut_y[y];
        let src = p.row(y);
        for (x, slot) in row.iter_mut().enumerate() {
            let (t0x, t1x, wx) = lut_x[x];
            let v = src[x];
            let m00 = maps[t0y * tiles_x + t0x].eval(v, bins);
            let m10 = maps[t0y * tiles_x + t1x].eval(v, bins);
            let m01 = maps[t1y * tiles_x + t0x].eval(v, bins);
            let m11 = maps[t1y * tiles_x + t1x].eval(v, bins);
            let top = m00 + wx * (m10 - m00);
            let bottom = m01 + wx * (m11 - m01);
            *slot = (top + wy * (bottom - top)).clamp(0.0, 1.0);
        }
    });
    Plane::from_raw(w, h, out)
}

/// Finds the pair of tile centers bracketing `pos` and the blend weight,
/// replicating the outermost tiles past the boundary.
fn bracket(centers: &[f64], pos: f64) -> (usize, usize, f64) {
    if pos <= centers[0] || centers.len() == 1 {
        return (0, 0, 0.0);
    }
    let last = centers.len() - 1;
    if pos >= centers[last] {
        return (last, last, 0.0);
    }
    let mut t = 0;
    while centers[t + 1] < pos {
        t += 1;
    }
    let w = (pos - centers[t]) / (centers[t + 1] - centers[t]);
    (t, t + 1, w)
}
