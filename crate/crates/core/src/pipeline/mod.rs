//! Raster decoding, luminance conversion and denoising/resizing.

mod filters;
pub mod pnm;
mod resize;

pub use filters::{gaussian_filter, gaussian_kernel, median_filter};
pub use resize::resize_bilinear;

use crate::error::{Error, Result};

/// Single-channel image with values in `[0, 255]`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!("image dimensions {width}x{height} are empty")));
        }
        if data.len() != width * height {
            return Err(Error::invalid(format!(
                "pixel buffer has {} values, expected {}x{} = {}",
                data.len(),
                width,
                height,
                width * height
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite() || **v < 0.0 || **v > 255.0) {
            return Err(Error::invalid(format!("pixel value {v} outside [0, 255]")));
        }
        Ok(Self { width, height, data })
    }

    /// Builds an image from arbitrary finite values, clamping them to `[0, 255]`.
    pub fn from_clamped(width: usize, height: usize, mut data: Vec<f64>) -> Result<Self> {
        for v in &mut data {
            if !v.is_finite() {
                return Err(Error::invalid("non-finite pixel value"));
            }
            *v = v.clamp(0.0, 255.0);
        }
        Self::new(width, height, data)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::from_clamped(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Pixel lookup with coordinates clamped to the image (edge replication).
    #[inline]
    pub(crate) fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.data[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn mirror_horizontal(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for y in 0..self.height {
            data.extend(self.row(y).iter().rev());
        }
        Self { data, ..*self }
    }
}

/// Converts interleaved 8-bit RGB to luminance with Rec.601 weights.
pub fn to_luminance(rgb: &[u8], width: usize, height: usize) -> Result<GrayImage> {
    if width == 0 || height == 0 {
        return Err(Error::invalid("zero-sized raster"));
    }
    if rgb.len() != width * height * 3 {
        return Err(Error::invalid(format!(
            "RGB buffer has {} bytes, expected {}",
            rgb.len(),
            width * height * 3
        )));
    }
    let data = rgb
        .chunks_exact(3)
        .map(|p| {
            let y = 0.299 * f64::from(p[0]) + 0.587 * f64::from(p[1]) + 0.114 * f64::from(p[2]);
            y.clamp(0.0, 255.0)
        })
        .collect();
    GrayImage::new(width, height, data)
}

/// Optional preprocessing, applied in the order resize, median, Gaussian.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PreprocessConfig {
    pub resize_to: Option<(usize, usize)>,
    pub median_radius: Option<usize>,
    pub gaussian_sigma: Option<f64>,
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some((w, h)) = self.resize_to {
            if w < 2 || h < 2 {
                return Err(Error::invalid(format!("resize target {w}x{h} must be at least 2x2")));
            }
        }
        if self.median_radius == Some(0) {
            return Err(Error::invalid("median radius must be at least 1"));
        }
        if let Some(s) = self.gaussian_sigma {
            if !s.is_finite() || s <= 0.0 {
                return Err(Error::invalid(format!("gaussian sigma {s} must be positive")));
            }
        }
        Ok(())
    }

    pub fn apply(&self, img: &GrayImage) -> Result<GrayImage> {
        self.validate()?;
        let mut out = match self.resize_to {
            Some((w, h)) => resize_bilinear(img, w, h)?,
            None => img.clone(),
        };
        if let Some(r) = self.median_radius {
            out = median_filter(&out, r)?;
        }
        if let Some(s) = self.gaussian_sigma {
            out = gaussian_filter(&out, s)?;
        }
        Ok(out)
    }
}
