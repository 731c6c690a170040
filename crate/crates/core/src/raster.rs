//! Grayscale raster storage and PNG I/O.
//!
//! A [`Raster`] is a row-major `rows × cols` grid of intensities in
//! `[0, 1]`, 1.0 being white. Files are read and written as 8-bit
//! grayscale PNG; color inputs are converted with the luma weights from
//! [`crate::imgproc::to_grayscale`].

use std::path::Path;

use crate::{Error, Result};

/// Grayscale image, intensities in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    rows: usize,
    cols: usize,
    data: Vec<f32>,
}

impl Raster {
    pub fn new(rows: usize, cols: usize, data: Vec<f32>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "raster must have at least one row and column, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "raster data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidInput(format!(
                "raster intensity {v} outside [0, 1]"
            )));
        }
        Ok(Raster { rows, cols, data })
    }

    /// Constant-intensity raster.
    pub fn filled(rows: usize, cols: usize, value: f32) -> Self {
        assert!(rows > 0 && cols > 0, "empty raster");
        assert!((0.0..=1.0).contains(&value));
        Raster {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn white(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, 1.0)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f32 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f32) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f32] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    /// Quantize to the 8-bit grid, the storage resolution of the PNG
    /// interchange format. Rasters loaded from disk are fixed points.
    pub fn to_u8(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|&v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
            .collect()
    }

    pub fn from_u8(rows: usize, cols: usize, bytes: &[u8]) -> Result<Self> {
        Raster::new(
            rows,
            cols,
            bytes.iter().map(|&b| b as f32 / 255.0).collect(),
        )
    }

    /// Read a PNG (or PGM) file. 8-bit grayscale maps directly; color
    /// images are reduced with the standard luma weights.
    pub fn load(path: &Path) -> Result<Self> {
        let img = image::open(path).map_err(|e| Error::Image {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_dynamic(img).map_err(|e| match e {
            Error::InvalidInput(m) | Error::ShapeMismatch(m) => Error::Image {
                path: path.to_path_buf(),
                message: m,
            },
            other => other,
        })
    }

    pub(crate) fn from_dynamic(img: image::DynamicImage) -> Result<Self> {
        use image::DynamicImage;
        let (w, h) = (img.width() as usize, img.height() as usize);
        match img {
            DynamicImage::ImageLuma8(gray) => Raster::from_u8(h, w, gray.as_raw()),
            other => {
                let rgb = other.to_rgb8();
                let mut channels = vec![0.0f32; 3 * h * w];
                for (i, px) in rgb.pixels().enumerate() {
                    channels[i] = px.0[0] as f32 / 255.0;
                    channels[h * w + i] = px.0[1] as f32 / 255.0;
                    channels[2 * h * w + i] = px.0[2] as f32 / 255.0;
                }
                crate::imgproc::to_grayscale(h, w, &channels)
            }
        }
    }

    /// Write as 8-bit grayscale PNG.
    pub fn save(&self, path: &Path) -> Result<()> {
        let buf: image::GrayImage =
            image::ImageBuffer::from_raw(self.cols as u32, self.rows as u32, self.to_u8())
                .expect("raster dims fit buffer");
        buf.save_with_format(path, image::ImageFormat::Png)
            .map_err(|e| Error::Image {
                path: path.to_path_buf(),
                message: e.to_string(),
            })
    }

    /// True if every pixel is exactly 0.0 or 1.0.
    pub fn is_binary(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0 || v == 1.0)
    }
}
