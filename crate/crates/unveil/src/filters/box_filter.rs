use crate::parallel;
use crate::plane::Plane;

/// Windowed mean over a `(2*radius+1)^2` neighborhood with partial-window
/// normalization at the borders (the window is intersected with the image and
/// the mean taken over the surviving pixels).
///
/// Backed by a summed-area table, so the per-pixel cost does not depend on
/// the radius.
pub fn box_filter(p: &Plane, radius: usize) -> Plane {
    assert!(radius >= 1, "box_filter radius must be >= 1");
    let (w, h) = p.dims();
    if w == 0 || h == 0 {
        return p.clone();
    }
    let integral = integral_image(p);
    let stride = w + 1;
    let mut out = vec![0.0f64; w * h];
    parallel::for_each_row_mut(&mut out, w, |y, row| {
        let y0 = y.saturating_sub(radius);
        let y1 = (y + radius + 1).min(h);
        for (x, slot) in row.iter_mut().enumerate() {
            let x0 = x.saturating_sub(radius);
            let x1 = (x + radius + 1).min(w);
            let sum = integral[y1 * stride + x1] - integral[y0 * stride + x1]
                - integral[y1 * stride + x0]
                + integral[y0 * stride + x0];
            *slot = sum / ((y1 - y0) * (x1 - x0)) as f64;
        }
    });
    Plane::from_raw(w, h, out)
}

/// Summed-area table with a zero top row and left column, so the sum over
/// `[x0, x1) x [y0, y1)` is the usual four-corner difference.
fn integral_image(p: &Plane) -> Vec<f64> {
    let (w, h) = p.dims();
    let stride = w + 1;
    let mut integral = vec![0.0f64; stride * (h + 1)];
    for y in 0..h {
        let row = p.row(y);
        let mut run = 0.0;
        for x in 0..w {
            run += row[x];
            integral[(y + 1) * stride + x + 1] = integral[y * stride + x + 1] + run;
        }
    }
    integral
}
