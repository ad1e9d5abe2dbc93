use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by image I/O and by the filter and enhancement operators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read `{path}`: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("cannot write `{path}`: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// The file is readable but not one of the supported encodings
    /// (8-bit RGB/RGBA PNG, binary PPM with maxval 255).
    #[error("`{path}`: unsupported format: {reason}")]
    UnsupportedFormat { path: PathBuf, reason: String },

    /// The file claims to be a supported format but its contents are corrupt.
    #[error("`{path}`: malformed image data: {reason}")]
    Decode { path: PathBuf, reason: String },

    #[error("image dimensions {width}x{height} overflow the addressable range")]
    DimensionOverflow { width: u64, height: u64 },

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("empty plane has no statistics")]
    EmptyPlane,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The brute-force reference filters refuse images past a size guard.
    #[error("image {0}x{1} exceeds the {2}x{2} brute-force size guard")]
    SizeGuard(usize, usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
