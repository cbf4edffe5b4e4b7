use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Number of representable gray levels (L).
pub const GRAY_LEVELS: usize = 256;
/// Brightest gray level (L - 1).
pub const MAX_GRAY: u8 = 255;

/// 8-bit grayscale raster, row-major, top-left first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

fn check_dimensions(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::EmptyImage { width, height });
    }
    let expected = width
        .checked_mul(height)
        .ok_or(Error::EmptyImage { width, height })?;
    if expected != len {
        return Err(Error::SampleCount {
            expected,
            actual: len,
        });
    }
    Ok(())
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        check_dimensions(width, height, pixels.len())?;
        Ok(Image {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        let len = width.saturating_mul(height);
        check_dimensions(width, height, len)?;
        Ok(Image {
            width,
            height,
            pixels: vec![value; len],
        })
    }

    /// Builds an image by evaluating `f(x, y)` for every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let len = width.saturating_mul(height);
        check_dimensions(width, height, len)?;
        let mut pixels = Vec::with_capacity(len);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Ok(Image {
            width,
            height,
            pixels,
        })
    }

    /// Callers guarantee `pixels.len() == width * height` with both nonzero.
    pub(crate) fn from_raw(width: usize, height: usize, pixels: Vec<u8>) -> Self {
        debug_assert!(width > 0 && height > 0 && pixels.len() == width * height);
        Image {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn max_gray(&self) -> u8 {
        MAX_GRAY
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn same_dimensions<T: Dimensions>(&self, other: &T) -> bool {
        self.dimensions() == other.dimensions()
    }

    /// Quarter turn clockwise: pixel `(x, y)` moves to `(height - 1 - y, x)`.
    pub fn rotate90(&self) -> Image {
        let (w, h) = self.dimensions();
        let mut pixels = Vec::with_capacity(w * h);
        for y in 0..w {
            for x in 0..h {
                pixels.push(self.get(y, h - 1 - x));
            }
        }
        Image::from_raw(h, w, pixels)
    }
}

impl core::fmt::Debug for Image {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Image")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("pixels", &self.pixels)
            .finish()
    }
}

/// Anything with a raster shape.
pub trait Dimensions {
    fn dimensions(&self) -> (usize, usize);
}

impl Dimensions for Image {
    fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }
}

/// Unclamped filter output. Values are finite `f64`; integer kernels on
/// 8-bit input produce exact integers.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedImage {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl SignedImage {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        check_dimensions(width, height, values.len())?;
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::SampleOutOfRange {
                index,
                value: values[index],
            });
        }
        Ok(SignedImage {
            width,
            height,
            values,
        })
    }

    pub(crate) fn from_raw(width: usize, height: usize, values: Vec<f64>) -> Self {
        debug_assert!(width > 0 && height > 0 && values.len() == width * height);
        SignedImage {
            width,
            height,
            values,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    /// Bitwise equality, distinguishing `0.0` from `-0.0`.
    pub fn bit_eq(&self, other: &SignedImage) -> bool {
        self.dimensions() == other.dimensions()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }

    pub fn rotate90(&self) -> SignedImage {
        let (w, h) = (self.width, self.height);
        let mut values = Vec::with_capacity(w * h);
        for y in 0..w {
            for x in 0..h {
                values.push(self.get(y, h - 1 - x));
            }
        }
        SignedImage::from_raw(h, w, values)
    }
}

impl From<&Image> for SignedImage {
    fn from(img: &Image) -> Self {
        SignedImage::from_raw(
            img.width,
            img.height,
            img.pixels.iter().map(|&p| f64::from(p)).collect(),
        )
    }
}

impl Dimensions for SignedImage {
    fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }
}

/// Raster of 0/1 values.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    bits: Vec<u8>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, bits: Vec<u8>) -> Result<Self> {
        check_dimensions(width, height, bits.len())?;
        if let Some(index) = bits.iter().position(|&b| b > 1) {
            return Err(Error::SampleOutOfRange {
                index,
                value: f64::from(bits[index]),
            });
        }
        Ok(BinaryImage {
            width,
            height,
            bits,
        })
    }

    pub(crate) fn from_raw(width: usize, height: usize, bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BinaryImage {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.bits[y * self.width + x]
    }

    pub fn complement(&self) -> BinaryImage {
        BinaryImage::from_raw(
            self.width,
            self.height,
            self.bits.iter().map(|&b| b ^ 1).collect(),
        )
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}

impl Dimensions for BinaryImage {
    fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }
}

/// Rounds half away from zero, then clamps into `[0, 255]`.
pub fn clamp_round(v: f64) -> Result<u8> {
    if !v.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(saturate(v))
}

/// `clamp_round` for values already known to be finite.
#[inline]
pub(crate) fn saturate(v: f64) -> u8 {
    let r = libm::round(v);
    if r <= 0.0 {
        0
    } else if r >= f64::from(MAX_GRAY) {
        MAX_GRAY
    } else {
        r as u8
    }
}
