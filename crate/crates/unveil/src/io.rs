//! Image file I/O: 8-bit PNG through the `image` codec and a hand-rolled
//! binary PPM (P6, maxval 255) reader/writer used by the byte-exact tests.
//!
//! Samples map between `u8` and `f64` as `u / 255` on load and
//! `round(clamp(x, 0, 1) * 255)` on save (round half away from zero).

use std::fs;
use std::io::Cursor;
use std::path::Path;

use crate::color::RgbImage;
use crate::error::{Error, Result};
use crate::plane::Plane;

const PNG_MAGIC: [u8; 8] = [0x89, b'P', b'N', b'G', 0x0D, 0x0A, 0x1A, 0x0A];

/// Decodes a PNG or binary PPM file; the format is sniffed from the content,
/// not the extension. PNG must be 8-bit RGB or RGBA (alpha is discarded).
pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    if bytes.starts_with(&PNG_MAGIC) {
        decode_png(path, &bytes)
    } else if bytes.starts_with(b"P6") {
        decode_ppm(path, &bytes)
    } else {
        Err(Error::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: "not a PNG or binary PPM (P6) file".into(),
        })
    }
}

/// Encodes to 8-bit PNG or binary PPM depending on the file extension.
pub fn save_image(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .unwrap_or_default();
    let bytes = match ext.as_str() {
        "png" => encode_png(path, img)?,
        "ppm" => encode_ppm(img),
        other => {
            return Err(Error::UnsupportedFormat {
                path: path.to_path_buf(),
                reason: format!("unsupported extension `{other}` (use .png or .ppm)"),
            })
        }
    };
    fs::write(path, bytes).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// The documented save-side quantization: round half away from zero.
pub fn quantize(x: f64) -> u8 {
    (x.clamp(0.0, 1.0) * 255.0).round() as u8
}

fn decode_png(path: &Path, bytes: &[u8]) -> Result<RgbImage> {
    let decoded = image::load_from_memory_with_format(bytes, image::ImageFormat::Png).map_err(
        |e| Error::Decode {
            path: path.to_path_buf(),
            reason: e.to_string(),
        },
    )?;
    let (raw, w, h, stride) = match decoded {
        image::DynamicImage::ImageRgb8(buf) => {
            let (w, h) = buf.dimensions();
            (buf.into_raw(), w, h, 3)
        }
        image::DynamicImage::ImageRgba8(buf) => {
            let (w, h) = buf.dimensions();
            (buf.into_raw(), w, h, 4)
        }
        other => {
            return Err(Error::UnsupportedFormat {
                path: path.to_path_buf(),
                reason: format!(
                    "only 8-bit RGB/RGBA PNG is supported (found {:?})",
                    other.color()
                ),
            })
        }
    };
    planes_from_bytes(w as usize, h as usize, &raw, stride)
}

fn decode_ppm(path: &Path, bytes: &[u8]) -> Result<RgbImage> {
    let mut cursor = 2usize; // past "P6"
    let mut fields = [0u64; 3];
    for field in fields.iter_mut() {
        *field = next_ppm_token(bytes, &mut cursor).ok_or_else(|| Error::Decode {
            path: path.to_path_buf(),
            reason: "truncated PPM header".into(),
        })?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: format!("PPM maxval {maxval} (only 255 is supported)"),
        });
    }
    // Exactly one whitespace byte separates the header from the pixel data.
    cursor += 1;
    let pixel_count = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(3))
        .filter(|&n| n <= usize::MAX as u64 / 8)
        .ok_or(Error::DimensionOverflow { width, height })? as usize;
    let data = bytes.get(cursor..cursor + pixel_count).ok_or_else(|| {
        Error::Decode {
            path: path.to_path_buf(),
            reason: "PPM pixel data shorter than header promises".into(),
        }
    })?;
    planes_from_bytes(width as usize, height as usize, data, 3)
}

/// Reads the next ASCII integer, skipping whitespace and `#` comments.
fn next_ppm_token(bytes: &[u8], cursor: &mut usize) -> Option<u64> {
    loop {
        while *cursor < bytes.len() && bytes[*cursor].is_ascii_whitespace() {
            *cursor += 1;
        }
        if *cursor < bytes.len() && bytes[*cursor] == b'#' {
            while *cursor < bytes.len() && bytes[*cursor] != b'\n' {
                *cursor += 1;
            }
            continue;
        }
        break;
    }
    let start = *cursor;
    while *cursor < bytes.len() && bytes[*cursor].is_ascii_digit() {
        *cursor += 1;
    }
    if *cursor == start {
        return None;
    }
    std::str::from_utf8(&bytes[start..*cursor]).ok()?.parse().ok()
}

fn planes_from_bytes(w: usize, h: usize, raw: &[u8], stride: usize) -> Result<RgbImage> {
    let n = w * h;
    let mut r = vec![0.0; n];
    let mut g = vec![0.0; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        r[i] = raw[i * stride] as f64 / 255.0;
        g[i] = raw[i * stride + 1] as f64 / 255.0;
        b[i] = raw[i * stride + 2] as f64 / 255.0;
    }
    RgbImage::new(
        Plane::from_raw(w, h, r),
        Plane::from_raw(w, h, g),
        Plane::from_raw(w, h, b),
    )
}

fn interleave_quantized(img: &RgbImage) -> Vec<u8> {
    let (w, h) = img.dims();
    let (r, g, b) = (img.r().as_slice(), img.g().as_slice(), img.b().as_slice());
    let mut raw = Vec::with_capacity(w * h * 3);
    for i in 0..w * h {
        raw.push(quantize(r[i]));
        raw.push(quantize(g[i]));
        raw.push(quantize(b[i]));
    }
    raw
}

fn encode_png(path: &Path, img: &RgbImage) -> Result<Vec<u8>> {
    let (w, h) = img.dims();
    let buf = image::RgbImage::from_raw(w as u32, h as u32, interleave_quantized(img))
        .expect("raw buffer length matches dimensions");
    let mut out = Vec::new();
    buf.write_to(&mut Cursor::new(&mut out), image::ImageFormat::Png)
        .map_err(|e| Error::Decode {
            path: path.to_path_buf(),
            reason: format!("PNG encoding failed: {e}"),
        })?;
    Ok(out)
}

fn encode_ppm(img: &RgbImage) -> Vec<u8> {
    let (w, h) = img.dims();
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    out.extend(interleave_quantized(img));
    out
}
