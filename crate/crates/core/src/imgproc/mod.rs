//! Preprocessing variants: grayscale conversion, classical binarizations,
//! grayscale normalization, height normalization, and degradation-style
//! augmentation.
//!
//! Binarization and the nlbin percentile filters operate on the 8-bit
//! intensity grid (the PNG storage resolution), which keeps the fast
//! integral-image implementations bit-identical to their naive
//! per-pixel counterparts.

mod augment;
mod binarize;
mod nlbin;

pub use augment::{augment, AugmentParams};
pub use binarize::{sauvola, sauvola_naive, wolf, wolf_naive, BinarizationParams};
pub use nlbin::{nlbin, nlbin_naive, NlbinParams};

use crate::{Error, Raster, Result};

/// Convert a 3-channel image (R, G, B planes concatenated, values in
/// `[0, 1]`) to grayscale with luma = 0.299 R + 0.587 G + 0.114 B.
pub fn to_grayscale(rows: usize, cols: usize, channels: &[f32]) -> Result<Raster> {
    let plane = rows * cols;
    if channels.len() != 3 * plane {
        return Err(Error::ShapeMismatch(format!(
            "expected 3x{rows}x{cols} channel data, got {} values",
            channels.len()
        )));
    }
    let (r, rest) = channels.split_at(plane);
    let (g, b) = rest.split_at(plane);
    let data: Vec<f32> = (0..plane)
        .map(|i| (0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i]).clamp(0.0, 1.0))
        .collect();
    Raster::new(rows, cols, data)
}

/// Bilinear rescale to `target_height`, preserving aspect ratio. Output
/// width is `round(cols * target / rows)`, at least 1. A raster already at
/// the target height is returned unchanged.
pub fn normalize_height(img: &Raster, target_height: usize) -> Result<Raster> {
    if target_height < 8 {
        return Err(Error::InvalidInput(format!(
            "target height must be at least 8, got {target_height}"
        )));
    }
    if img.rows() == target_height {
        return Ok(img.clone());
    }
    let scale = target_height as f64 / img.rows() as f64;
    let new_cols = ((img.cols() as f64 * scale).round() as usize).max(1);
    Ok(resize_bilinear(img, target_height, new_cols))
}

pub(crate) fn resize_bilinear(img: &Raster, rows: usize, cols: usize) -> Raster {
    let mut data = vec![0.0f32; rows * cols];
    let sy = img.rows() as f64 / rows as f64;
    let sx = img.cols() as f64 / cols as f64;
    for y in 0..rows {
        let fy = ((y as f64 + 0.5) * sy - 0.5).clamp(0.0, (img.rows() - 1) as f64);
        let y0 = fy.floor() as usize;
        let y1 = (y0 + 1).min(img.rows() - 1);
        let wy = fy - y0 as f64;
        for x in 0..cols {
            let fx = ((x as f64 + 0.5) * sx - 0.5).clamp(0.0, (img.cols() - 1) as f64);
            let x0 = fx.floor() as usize;
            let x1 = (x0 + 1).min(img.cols() - 1);
            let wx = fx - x0 as f64;
            let top = img.get(y0, x0) as f64 * (1.0 - wx) + img.get(y0, x1) as f64 * wx;
            let bot = img.get(y1, x0) as f64 * (1.0 - wx) + img.get(y1, x1) as f64 * wx;
            data[y * cols + x] = (top * (1.0 - wy) + bot * wy).clamp(0.0, 1.0) as f32;
        }
    }
    Raster::new(rows, cols, data).expect("resize output in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::DetRng;

    #[test]
    fn grayscale_pure_colors() {
        let white = to_grayscale(1, 1, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(white.get(0, 0), 1.0);
        let red = to_grayscale(1, 1, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(red.get(0, 0), 0.299);
    }

    #[test]
    fn grayscale_matches_formula_oracle() {
        let (rows, cols) = (7, 11);
        let mut rng = DetRng::stream(5, &["gray"], &[]);
        let channels: Vec<f32> = (0..3 * rows * cols)
            .map(|_| rng.unit() as f32)
            .collect();
        let out = to_grayscale(rows, cols, &channels).unwrap();
        let plane = rows * cols;
        for i in 0..plane {
            let expected =
                0.299 * channels[i] + 0.587 * channels[plane + i] + 0.114 * channels[2 * plane + i];
            assert_eq!(out.data()[i], expected);
        }
    }

    #[test]
    fn height_halving_and_identity() {
        let img = Raster::white(96, 200);
        let half = normalize_height(&img, 48).unwrap();
        assert_eq!((half.rows(), half.cols()), (48, 100));

        let same = Raster::white(48, 100);
        assert_eq!(normalize_height(&same, 48).unwrap(), same);
    }

    #[test]
    fn height_rounding_rule() {
        let img = Raster::white(47, 99);
        let out = normalize_height(&img, 48).unwrap();
        assert_eq!(out.cols(), 101);
    }

    #[test]
    fn height_is_idempotent_at_target() {
        let mut img = Raster::white(30, 77);
        for r in 0..30 {
            for c in 0..77 {
                img.set(r, c, ((r * c) % 200) as f32 / 255.0);
            }
        }
        let once = normalize_height(&img, 48).unwrap();
        let twice = normalize_height(&once, 48).unwrap();
        assert_eq!(once, twice);
    }
}
