//! Data-parallel loop helpers.
//!
//! With the `parallel` feature the loops run on the rayon thread pool;
//! without it they degrade to plain sequential iteration. Every closure
//! computes its output element (or row) from read-only inputs in a fixed
//! per-element order, so the results are bit-identical in both modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk size for flat elementwise maps.
const CHUNK: usize = 1 << 12;

pub(crate) fn map(src: &[f64], f: impl Fn(f64) -> f64 + Sync) -> Vec<f64> {
    let mut out = vec![0.0; src.len()];
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(CHUNK)
        .zip(src.par_chunks(CHUNK))
        .for_each(|(o, s)| {
            for (o, s) in o.iter_mut().zip(s) {
                *o = f(*s);
            }
        });
    #[cfg(not(feature = "parallel"))]
    for (o, s) in out.iter_mut().zip(src) {
        *o = f(*s);
    }
    out
}

pub(crate) fn zip_map(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64 + Sync) -> Vec<f64> {
    assert_eq!(a.len(), b.len());
    let mut out = vec![0.0; a.len()];
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(CHUNK)
        .zip(a.par_chunks(CHUNK).zip(b.par_chunks(CHUNK)))
        .for_each(|(o, (a, b))| {
            for ((o, a), b) in o.iter_mut().zip(a).zip(b) {
                *o = f(*a, *b);
            }
        });
    #[cfg(not(feature = "parallel"))]
    for ((o, a), b) in out.iter_mut().zip(a).zip(b) {
        *o = f(*a, *b);
    }
    out
}

/// Runs `f(y, row)` for every row of a row-major buffer.
pub(crate) fn for_each_row_mut(
    data: &mut [f64],
    width: usize,
    f: impl Fn(usize, &mut [f64]) + Sync + Send,
) {
    if width == 0 {
        return;
    }
    #[cfg(feature = "parallel")]
    data.par_chunks_mut(width)
        .enumerate()
        .for_each(|(y, row)| f(y, row));
    #[cfg(not(feature = "parallel"))]
    data.chunks_mut(width).enumerate().for_each(|(y, row)| f(y, row));
}
