//! Low-level image filters: box filter, separable Gaussian, guided filter,
//! edge-aware (joint spatial/range Gaussian) smoothing, and CLAHE, plus the
//! brute-force [`reference`] implementations they are validated against.
//!
//! All filters are pure functions and map a constant plane to itself. Any
//! internal parallelism works over rows or range slices with a fixed
//! per-pixel summation order, so outputs are bit-deterministic.

mod box_filter;
mod clahe;
mod edge_aware;
mod gaussian;
mod guided;
pub mod reference;

pub use box_filter::box_filter;
pub use clahe::{clahe, clip_and_redistribute, ClaheParams};
pub use edge_aware::{edge_aware_smooth, edge_aware_smooth_rgb, EdgeAwareParams};
pub use gaussian::gaussian_blur;
pub use guided::{guided_filter, GuidedFilterParams};
