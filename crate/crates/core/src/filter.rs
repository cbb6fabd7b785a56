//! Separable filtering with symmetric boundary extension.
//!
//! Shared by the pyramid transforms and the Gaussian degradation
//! generator. Boundaries mirror without repeating the edge sample, so a
//! row `a b c d` extends as `... c b | a b c d | c b ...`.

use crate::gray::GrayImage;

/// Maps an out-of-range index into `0..n` by whole-sample reflection.
pub(crate) fn reflect(i: isize, n: usize) -> usize {
    debug_assert!(n >= 1);
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let mut i = i.rem_euclid(period);
    if i >= n as isize {
        i = period - i;
    }
    i as usize
}

/// Convolves every row with `kernel` (odd length, centered).
pub(crate) fn convolve_rows(img: &GrayImage, kernel: &[f64]) -> GrayImage {
    debug_assert!(kernel.len() % 2 == 1);
    let (w, h) = img.dimensions();
    let radius = kernel.len() as isize / 2;
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        let row = img.row(y);
        for x in 0..w {
            let mut acc = 0.0;
            for (t, &k) in kernel.iter().enumerate() {
                let src = reflect(x as isize + t as isize - radius, w);
                acc += k * row[src];
            }
            out.push(acc);
        }
    }
    GrayImage::from_raw(w, h, out)
}

/// Convolves every column with `kernel` (odd length, centered).
pub(crate) fn convolve_cols(img: &GrayImage, kernel: &[f64]) -> GrayImage {
    debug_assert!(kernel.len() % 2 == 1);
    let (w, h) = img.dimensions();
    let radius = kernel.len() as isize / 2;
    let data = img.data();
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for (t, &k) in kernel.iter().enumerate() {
            let src = reflect(y as isize + t as isize - radius, h);
            let src_row = &data[src * w..(src + 1) * w];
            let dst_row = &mut out[y * w..(y + 1) * w];
            for x in 0..w {
                dst_row[x] += k * src_row[x];
            }
        }
    }
    GrayImage::from_raw(w, h, out)
}

/// Separable convolution: rows then columns.
pub(crate) fn convolve_separable(img: &GrayImage, kernel: &[f64]) -> GrayImage {
    convolve_cols(&convolve_rows(img, kernel), kernel)
}
