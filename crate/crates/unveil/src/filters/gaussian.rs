use crate::parallel;
use crate::plane::Plane;

/// Separable Gaussian convolution. The kernel is truncated at `3*sigma`,
/// renormalized to sum to one, and the borders are handled by replication.
pub fn gaussian_blur(p: &Plane, sigma: f64) -> Plane {
    assert!(sigma > 0.0, "gaussian_blur sigma must be positive");
    let taps = kernel(sigma, 3.0);
    let tmp = horizontal_pass(p, &taps, BorderMode::Replicate);
    vertical_pass(&tmp, &taps, BorderMode::Replicate)
}

/// Sampled 1-D Gaussian, truncated at `extent * sigma` and normalized.
pub(crate) fn kernel(sigma: f64, extent: f64) -> Vec<f64> {
    let radius = (extent * sigma).floor() as usize;
    let mut taps: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let d = i as f64 - radius as f64;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in taps.iter_mut() {
        *t /= sum;
    }
    taps
}

#[derive(Clone, Copy, PartialEq)]
pub(crate) enum BorderMode {
    Replicate,
    Zero,
}

pub(crate) fn horizontal_pass(p: &Plane, taps: &[f64], border: BorderMode) -> Plane {
    let (w, h) = p.dims();
    let radius = taps.len() / 2;
    let mut out = vec![0.0f64; w * h];
    parallel::for_each_row_mut(&mut out, w, |y, row| {
        let src = p.row(y);
        for (x, slot) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, &t) in taps.iter().enumerate() {
                let offset = x as isize + k as isize - radius as isize;
                match border {
                    BorderMode::Replicate => {
                        let xi = offset.clamp(0, w as isize - 1) as usize;
                        acc += t * src[xi];
                    }
                    BorderMode::Zero => {
                        if (0..w as isize).contains(&offset) {
                            acc += t * src[offset as usize];
                        }
                    }
                }
            }
            *slot = acc;
        }
    });
    Plane::from_raw(w, h, out)
}

pub(crate) fn vertical_pass(p: &Plane, taps: &[f64], border: BorderMode) -> Plane {
    let (w, h) = p.dims();
    let radius = taps.len() / 2;
    let mut out = vec![0.0f64; w * h];
    parallel::for_each_row_mut(&mut out, w, |y, row| {
        for (k, &t) in taps.iter().enumerate() {
            let offset = y as isize + k as isize - radius as isize;
            let src = match border {
                BorderMode::Replicate => p.row(offset.clamp(0, h as isize - 1) as usize),
                BorderMode::Zero => {
                    if (0..h as isize).contains(&offset) {
                        p.row(offset as usize)
                    } else {
                        continue;
                    }
                }
            };
            for (slot, &s) in row.iter_mut().zip(src) {
                *slot += t * s;
            }
        }
    });
    Plane::from_raw(w, h, out)
}
