//! Same-size 2D neighborhood filtering with a centered, odd-sized kernel.
//!
//! [`correlate`] is the sliding weighted sum; [`convolve`] is correlation with
//! the kernel turned by 180 degrees. Both return a [`SignedImage`] and never
//! clamp.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::{Executor, Serial};
use crate::image::{saturate, Image, SignedImage, MAX_GRAY};

/// Odd-sized, row-major filter coefficients anchored at the center tap.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    width: usize,
    height: usize,
    coeffs: Vec<f64>,
}

impl Kernel {
    pub fn new(width: usize, height: usize, coeffs: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || width.is_multiple_of(2) || height.is_multiple_of(2) {
            return Err(Error::InvalidKernel("dimensions must be odd and positive"));
        }
        if width.checked_mul(height) != Some(coeffs.len()) {
            return Err(Error::InvalidKernel("coefficient count does not match dimensions"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidKernel("coefficients must be finite"));
        }
        if coeffs.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidKernel("at least one coefficient must be nonzero"));
        }
        // |response| <= 255 * l1; twice that must stay finite for display rescaling.
        let l1: f64 = coeffs.iter().map(|c| c.abs()).sum();
        if !(l1 * 2.0 * f64::from(MAX_GRAY)).is_finite() {
            return Err(Error::InvalidKernel("coefficient magnitudes are too large"));
        }
        Ok(Kernel {
            width,
            height,
            coeffs,
        })
    }

    pub fn from_rows<const W: usize, const H: usize>(rows: [[f64; W]; H]) -> Result<Self> {
        Kernel::new(W, H, rows.iter().flatten().copied().collect())
    }

    /// `size x size` kernel of ones.
    pub fn ones(size: usize) -> Result<Self> {
        Kernel::new(size, size, vec![1.0; size.saturating_mul(size)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, row: usize, col: usize) -> f64 {
        self.coeffs[row * self.width + col]
    }

    pub fn center(&self) -> (usize, usize) {
        (self.width / 2, self.height / 2)
    }
}

/// Coefficient `(i, j)` of the result is coefficient
/// `(height - 1 - i, width - 1 - j)` of `k`.
pub fn rot180(k: &Kernel) -> Kernel {
    let mut coeffs = k.coeffs.clone();
    coeffs.reverse();
    Kernel {
        width: k.width,
        height: k.height,
        coeffs,
    }
}

/// How taps that fall outside the image are resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BorderPolicy {
    /// Nearest in-range pixel.
    #[default]
    Replicate,
    /// Treated as 0.
    Zero,
}

impl BorderPolicy {
    /// Maps a possibly out-of-range coordinate to an in-range one, or `None`
    /// if the tap reads as zero.
    #[inline]
    pub(crate) fn resolve(self, coord: isize, len: usize) -> Option<usize> {
        if coord >= 0 && (coord as usize) < len {
            return Some(coord as usize);
        }
        match self {
            BorderPolicy::Replicate => Some(if coord < 0 { 0 } else { len - 1 }),
            BorderPolicy::Zero => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BorderPolicy::Replicate => "replicate",
            BorderPolicy::Zero => "zero",
        }
    }
}

/// Output = Σ k(i, j) · f(x + j − cx, y + i − cy), summed with `i` outer and
/// `j` inner. Out-of-range taps follow `border`.
pub fn correlate(img: &Image, k: &Kernel, border: BorderPolicy) -> SignedImage {
    correlate_with(&Serial, img, k, border)
}

pub fn correlate_with<E: Executor>(
    exec: &E,
    img: &Image,
    k: &Kernel,
    border: BorderPolicy,
) -> SignedImage {
    let (w, h) = img.dimensions();
    let (cx, cy) = k.center();
    let mut out = vec![0.0f64; w * h];
    exec.run(w, &mut out, |first_row, rows| {
        // Source row extended by cx taps on each side.
        let mut padded = vec![0.0f64; w + k.width - 1];
        for (r, acc) in rows.chunks_mut(w).enumerate() {
            let y = first_row + r;
            for i in 0..k.height {
                let sy = y as isize + i as isize - cy as isize;
                // A zero-border row contributes only zero products.
                let Some(sy) = border.resolve(sy, h) else {
                    continue;
                };
                let src = img.row(sy);
                for (p, slot) in padded.iter_mut().enumerate() {
                    let sx = p as isize - cx as isize;
                    *slot = border.resolve(sx, w).map_or(0.0, |sx| f64::from(src[sx]));
                }
                for j in 0..k.width {
                    let c = k.coeff(i, j);
                    if c == 0.0 {
                        continue;
                    }
                    for (a, &p) in acc.iter_mut().zip(&padded[j..j + w]) {
                        *a += c * p;
                    }
                }
            }
        }
    });
    SignedImage::from_raw(w, h, out)
}

/// True convolution: correlation with the kernel rotated by 180 degrees.
pub fn convolve(img: &Image, k: &Kernel, border: BorderPolicy) -> SignedImage {
    convolve_with(&Serial, img, k, border)
}

pub fn convolve_with<E: Executor>(
    exec: &E,
    img: &Image,
    k: &Kernel,
    border: BorderPolicy,
) -> SignedImage {
    correlate_with(exec, img, &rot180(k), border)
}

/// Discrete Laplacian stencil.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LaplacianVariant {
    /// Axis neighbors only, center −4.
    #[default]
    Four,
    /// All eight neighbors, center −8.
    Eight,
}

impl LaplacianVariant {
    pub fn kernel(self) -> Kernel {
        let rows = match self {
            LaplacianVariant::Four => [[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]],
            LaplacianVariant::Eight => [[1.0, 1.0, 1.0], [1.0, -8.0, 1.0], [1.0, 1.0, 1.0]],
        };
        Kernel::from_rows(rows).expect("stencil is a valid kernel")
    }

    pub fn name(self) -> &'static str {
        match self {
            LaplacianVariant::Four => "four",
            LaplacianVariant::Eight => "eight",
        }
    }
}

pub fn laplacian(img: &Image, variant: LaplacianVariant, border: BorderPolicy) -> SignedImage {
    laplacian_with(&Serial, img, variant, border)
}

pub fn laplacian_with<E: Executor>(
    exec: &E,
    img: &Image,
    variant: LaplacianVariant,
    border: BorderPolicy,
) -> SignedImage {
    correlate_with(exec, img, &variant.kernel(), border)
}

/// How a signed result is mapped back to gray levels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DisplayMode {
    /// Round, then clamp into `[0, 255]`.
    #[default]
    Clamp,
    /// Affine map of `[min, max]` onto `[0, 255]`, then round. A flat input
    /// maps to all zeros.
    Rescale,
}

impl DisplayMode {
    pub fn name(self) -> &'static str {
        match self {
            DisplayMode::Clamp => "clamp",
            DisplayMode::Rescale => "rescale",
        }
    }
}

pub fn clamp_to_display(s: &SignedImage, mode: DisplayMode) -> Image {
    clamp_to_display_with(&Serial, s, mode)
}

pub fn clamp_to_display_with<E: Executor>(exec: &E, s: &SignedImage, mode: DisplayMode) -> Image {
    let w = s.width();
    let values = s.values();
    let mut out = vec![0u8; values.len()];
    match mode {
        DisplayMode::Clamp => exec.run(w, &mut out, |first_row, rows| {
            let start = first_row * w;
            for (d, &v) in rows.iter_mut().zip(&values[start..]) {
                *d = saturate(v);
            }
        }),
        DisplayMode::Rescale => {
            let (min, max) = values
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                    (lo.min(v), hi.max(v))
                });
            if max > min {
                let span = max - min;
                let top = f64::from(MAX_GRAY);
                exec.run(w, &mut out, |first_row, rows| {
                    let start = first_row * w;
                    for (d, &v) in rows.iter_mut().zip(&values[start..]) {
                        *d = saturate((v - min) * top / span);
                    }
                });
            }
        }
    }
    Image::from_raw(w, s.height(), out)
}

macro_rules! named_enum {
    ($ty:ty, $what:literal, $($name:literal => $variant:expr),+) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($variant),)+
                    _ => Err(Error::InvalidParameter {
                        name: $what,
                        reason: concat!("expected one of:", $(" ", $name),+),
                    }),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

named_enum!(BorderPolicy, "border", "replicate" => BorderPolicy::Replicate, "zero" => BorderPolicy::Zero);
named_enum!(LaplacianVariant, "variant", "four" => LaplacianVariant::Four, "eight" => LaplacianVariant::Eight);
named_enum!(DisplayMode, "display", "clamp" => DisplayMode::Clamp, "rescale" => DisplayMode::Rescale);
