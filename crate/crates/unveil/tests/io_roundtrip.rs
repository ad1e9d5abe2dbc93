//! File format round trips and golden bytes.
//!
//! The PPM golden bytes and the PNG decoding fixture below were produced
//! once with an independent encoder (Pillow) for the fixed 4x4 test image
//! whose samples are `(3*i + channel) / 37`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unveil::io::quantize;
use unveil::{load_image, save_image, Plane, RgbImage};

/// `P6\n4 4\n255\n` followed by the quantized samples.
const GOLDEN_PPM: [u8; 59] = [
    0x50, 0x36, 0x0a, 0x34, 0x20, 0x34, 0x0a, 0x32, 0x35, 0x35, 0x0a, 0x00, 0x07, 0x0e, 0x15,
    0x1c, 0x22, 0x29, 0x30, 0x37, 0x3e, 0x45, 0x4c, 0x53, 0x5a, 0x60, 0x67, 0x6e, 0x75, 0x7c,
    0x83, 0x8a, 0x91, 0x98, 0x9f, 0xa5, 0xac, 0xb3, 0xba, 0xc1, 0xc8, 0xcf, 0xd6, 0xdd, 0xe3,
    0xea, 0xf1, 0xf8, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff,
];

/// The same 4x4 image encoded as PNG by the independent encoder.
const GOLDEN_PNG: [u8; 103] = [
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44,
    0x52, 0x00, 0x00, 0x00, 0x04, 0x00, 0x00, 0x00, 0x04, 0x08, 0x02, 0x00, 0x00, 0x00, 0x26,
    0x93, 0x09, 0x29, 0x00, 0x00, 0x00, 0x2e, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x64,
    0x60, 0xe7, 0x13, 0x15, 0x15, 0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x65, 0x09, 0x0e, 0x0e,
    0x82, 0xb0, 0x44, 0x45, 0x45, 0x59, 0x82, 0x82, 0x82, 0x21, 0x2c, 0x11, 0x11, 0x11, 0xc6,
    0x1f, 0xff, 0xff, 0xb3, 0x33, 0x40, 0x01, 0x00, 0xa4, 0xff, 0x07, 0x3b, 0xb0, 0x7e, 0x3e,
    0xa4, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82,
];

fn fixture_4x4() -> RgbImage {
    let mut channels = [Vec::new(), Vec::new(), Vec::new()];
    for i in 0..16 {
        for (ch, data) in channels.iter_mut().enumerate() {
            data.push((3 * i + ch) as f64 / 37.0);
        }
    }
    let [r, g, b] = channels;
    RgbImage::new(
        Plane::from_vec(4, 4, r).unwrap(),
        Plane::from_vec(4, 4, g).unwrap(),
        Plane::from_vec(4, 4, b).unwrap(),
    )
    .unwrap()
}

#[test]
fn golden_ppm_bytes_match_independent_encoder() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fixture.ppm");
    save_image(&fixture_4x4(), &path).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), GOLDEN_PPM);
}

#[test]
fn independently_encoded_png_decodes_to_the_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fixture.png");
    std::fs::write(&path, GOLDEN_PNG).unwrap();
    let decoded = load_image(&path).unwrap();
    let expect = fixture_4x4();
    for (got, want) in decoded.channels().iter().zip(expect.channels().iter()) {
        for (g, w) in got.as_slice().iter().zip(want.as_slice()) {
            assert_eq!(*g, quantize(*w) as f64 / 255.0);
        }
    }
}

#[test]
fn png_encoding_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.png");
    let b = dir.path().join("b.png");
    save_image(&fixture_4x4(), &a).unwrap();
    save_image(&fixture_4x4(), &b).unwrap();
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    // And our own output must decode back to the quantized fixture.
    let decoded = load_image(&a).unwrap();
    let expect = fixture_4x4();
    for (got, want) in decoded.channels().iter().zip(expect.channels().iter()) {
        for (g, w) in got.as_slice().iter().zip(want.as_slice()) {
            assert_eq!(*g, quantize(*w) as f64 / 255.0);
        }
    }
}

#[test]
fn save_load_round_trip_is_exact_for_quantized_images() {
    // 100 random images whose samples are already 8-bit representable, so
    // load(save(img)) must reproduce the planes exactly, in both formats.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let dir = tempfile::tempdir().unwrap();
    for case in 0..100 {
        let (w, h) = (rng.random_range(1..24), rng.random_range(1..24));
        let mut make = |_: usize| {
            let data: Vec<f64> = (0..w * h)
                .map(|_| rng.random_range(0..=255u32) as f64 / 255.0)
                .collect();
            Plane::from_vec(w, h, data).unwrap()
        };
        let img = RgbImage::new(make(0), make(1), make(2)).unwrap();
        let ext = if case % 2 == 0 { "ppm" } else { "png" };
        let path = dir.path().join(format!("rt{case}.{ext}"));
        save_image(&img, &path).unwrap();
        let back = load_image(&path).unwrap();
        assert_eq!(back, img, "round trip failed for {path:?}");
    }
}
