//! Reverse-filtering image enhancement.
//!
//! The crate brightens low-light images and clarifies hazy, foggy,
//! sand-dust, and underwater photographs by approximately inverting a filter
//! that simulates the distortion: an edge-preserving smoother stands in for
//! the degradation, and dividing the observed image by a power of its own
//! smoothing undoes it. Everything operates on the value channel of HSV and
//! leaves hue and saturation untouched.
//!
//! The building blocks live in [`filters`] (box, Gaussian, guided,
//! edge-aware smoothing, CLAHE, and brute-force reference implementations)
//! and the user-facing operators in [`enhance`]. Image containers,
//! HSV conversion, statistics, and PNG/PPM I/O are at the crate root.
//!
//! With the default `parallel` feature the filters fan out over rows and
//! range slices on the rayon thread pool; disabling it yields a fully
//! sequential build with bit-identical outputs.

pub mod color;
pub mod enhance;
pub mod error;
pub mod filters;
pub mod io;
mod parallel;
pub mod plane;

pub use color::{hsv_to_rgb, rgb_to_hsv, HsvImage, RgbImage};
pub use error::{Error, Result};
pub use io::{load_image, save_image};
pub use plane::Plane;
