//! Grayscale pixel buffer shared by the dataset, tracker, and network
//! modules.
//!
//! Intensities are stored as `f32` in `[0, 1]`; all arithmetic that feeds
//! the metrics or the network is done in `f64`.

use alloc::vec;
use alloc::vec::Vec;

/// Row-major grayscale image.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl Image {
    /// Panics if `data.len() != width * height`.
    pub fn from_data(width: usize, height: usize, data: Vec<f32>) -> Self {
        assert_eq!(data.len(), width * height, "pixel count mismatch");
        Self {
            width,
            height,
            data,
        }
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::from_data(width, height, vec![0.0; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f32) {
        self.data[y * self.width + x] = v;
    }

    /// Pixel value at integer coordinates, zero outside the frame.
    #[inline]
    pub fn get_or_zero(&self, x: i64, y: i64) -> f64 {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            0.0
        } else {
            self.data[y as usize * self.width + x as usize] as f64
        }
    }

    /// Bilinear sample at a continuous position, treating pixel (i, j) as a
    /// point sample at (i + 0.5, j + 0.5). Outside the frame the image is
    /// zero.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> f64 {
        let fx = x - 0.5;
        let fy = y - 0.5;
        let x0 = crate::math::floor(fx);
        let y0 = crate::math::floor(fy);
        let tx = fx - x0;
        let ty = fy - y0;
        let (x0, y0) = (x0 as i64, y0 as i64);
        let v00 = self.get_or_zero(x0, y0);
        let v10 = self.get_or_zero(x0 + 1, y0);
        let v01 = self.get_or_zero(x0, y0 + 1);
        let v11 = self.get_or_zero(x0 + 1, y0 + 1);
        (v00 * (1.0 - tx) + v10 * tx) * (1.0 - ty) + (v01 * (1.0 - tx) + v11 * tx) * ty
    }

    /// Mean intensity in `f64`.
    pub fn mean(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        let sum: f64 = self.data.iter().map(|&v| v as f64).sum();
        sum / self.data.len() as f64
    }

    /// Copy of the image shifted by whole pixels, zero-filled at the edges.
    pub fn translated(&self, dx: i64, dy: i64) -> Image {
        let mut out = Image::zeros(self.width, self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                let v = self.get_or_zero(x as i64 - dx, y as i64 - dy);
                out.set(x, y, v as f32);
            }
        }
        out
    }
}
