//! Seeded image generators and disk helpers shared by the CLI and
//! acceptance test binaries.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfsn_core::GrayImage;

#[allow(dead_code)]
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform white noise in [0, 255].
#[allow(dead_code)]
pub fn noise_image(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut r = rng(seed);
    GrayImage::from_fn(width, height, |_, _| r.random_range(0.0..=255.0)).unwrap()
}

/// Natural-looking texture: multi-octave value noise with 1/f amplitude
/// falloff, rescaled to the full [0, 255] range.
pub fn natural_image(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut r = rng(seed ^ 0x5eed);
    let mut acc = vec![0.0f64; width * height];
    let mut amplitude = 1.0;
    let mut cell = 64.0f64;
    while cell >= 1.0 {
        let gw = (width as f64 / cell).ceil() as usize + 2;
        let gh = (height as f64 / cell).ceil() as usize + 2;
        let lattice: Vec<f64> = (0..gw * gh).map(|_| r.random_range(-1.0..1.0)).collect();
        for y in 0..height {
            let fy = y as f64 / cell;
            let y0 = fy.floor() as usize;
            let ty = fy - y0 as f64;
            let sy = ty * ty * (3.0 - 2.0 * ty);
            for x in 0..width {
                let fx = x as f64 / cell;
                let x0 = fx.floor() as usize;
                let tx = fx - x0 as f64;
                let sx = tx * tx * (3.0 - 2.0 * tx);
                let v00 = lattice[y0 * gw + x0];
                let v10 = lattice[y0 * gw + x0 + 1];
                let v01 = lattice[(y0 + 1) * gw + x0];
                let v11 = lattice[(y0 + 1) * gw + x0 + 1];
                let v = v00 * (1.0 - sx) * (1.0 - sy)
                    + v10 * sx * (1.0 - sy)
                    + v01 * (1.0 - sx) * sy
                    + v11 * sx * sy;
                acc[y * width + x] += amplitude * v;
            }
        }
        amplitude *= 0.55;
        cell /= 2.0;
    }
    let min = acc.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = acc.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = 255.0 / (max - min);
    GrayImage::new(
        width,
        height,
        acc.into_iter().map(|v| (v - min) * scale).collect(),
    )
    .unwrap()
}

/// Quantizes to 8 bits and writes a grayscale PNG.
pub fn save_png(img: &GrayImage, path: &Path) {
    let buf: Vec<u8> = img
        .data()
        .iter()
        .map(|&v| v.round().clamp(0.0, 255.0) as u8)
        .collect();
    image::GrayImage::from_raw(img.width() as u32, img.height() as u32, buf)
        .expect("buffer matches dimensions")
        .save(path)
        .expect("PNG encode");
}

/// Writes a manifest with the standard header plus the given rows.
#[allow(dead_code)]
pub fn write_manifest(path: &Path, rows: &[String]) {
    let mut contents = String::from("test_path,ref_path,mos,category,scale_factor,algorithm\n");
    for row in rows {
        contents.push_str(row);
        contents.push('\n');
    }
    std::fs::write(path, contents).expect("manifest write");
}
