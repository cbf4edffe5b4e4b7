//! Sharpening built on the convolution engine: box blur, unsharp masking
//! (`f - blur(f)`) and Laplacian sharpening (`f - ∇²f`).
//!
//! Signed intermediates are clamped exactly once, at the end.

use alloc::vec;

use crate::conv::{clamp_to_display_with, laplacian_with, BorderPolicy, DisplayMode, LaplacianVariant};
use crate::error::{Error, Result};
use crate::exec::{Executor, Serial};
use crate::image::{Image, SignedImage};

pub const DEFAULT_RADIUS: usize = 1;
/// Keeps `(2r + 1)^2 * 255` well inside `u64`.
pub const MAX_RADIUS: usize = 65_535;

/// Accepts `1..=MAX_RADIUS`.
pub fn validate_radius(radius: usize) -> Result<()> {
    if radius == 0 {
        return Err(Error::InvalidParameter {
            name: "radius",
            reason: "must be at least 1",
        });
    }
    if radius > MAX_RADIUS {
        return Err(Error::InvalidParameter {
            name: "radius",
            reason: "must not exceed 65535",
        });
    }
    Ok(())
}

/// Sum of `line[a..=b]` where indices outside the line follow `border`.
/// `prefix[i]` is the sum of the first `i` samples; `first`/`last` are the
/// end samples used for replication.
#[inline]
fn window_sum(prefix: &[u64], a: i64, b: i64, border: BorderPolicy, first: u64, last: u64) -> u64 {
    let len = (prefix.len() - 1) as i64;
    let lo = a.max(0);
    let hi = b.min(len - 1);
    let mut sum = prefix[(hi + 1) as usize] - prefix[lo as usize];
    if border == BorderPolicy::Replicate {
        if a < 0 {
            sum += (-a) as u64 * first;
        }
        if b > len - 1 {
            sum += (b - (len - 1)) as u64 * last;
        }
    }
    sum
}

/// Mean over the `(2r + 1)²` window around each pixel, rounded half up.
/// Zero-border windows still divide by the full window size.
pub fn box_blur(img: &Image, radius: usize, border: BorderPolicy) -> Result<Image> {
    box_blur_with(&Serial, img, radius, border)
}

pub fn box_blur_with<E: Executor>(
    exec: &E,
    img: &Image,
    radius: usize,
    border: BorderPolicy,
) -> Result<Image> {
    validate_radius(radius)?;
    let (w, h) = img.dimensions();
    let r = radius as i64;

    // Horizontal window sums, one row at a time.
    let mut hsum = vec![0u64; w * h];
    exec.run(w, &mut hsum, |first_row, rows| {
        let mut prefix = vec![0u64; w + 1];
        for (k, out) in rows.chunks_mut(w).enumerate() {
            let src = img.row(first_row + k);
            for (i, &p) in src.iter().enumerate() {
                prefix[i + 1] = prefix[i] + u64::from(p);
            }
            let (first, last) = (u64::from(src[0]), u64::from(src[w - 1]));
            for (x, o) in out.iter_mut().enumerate() {
                let x = x as i64;
                *o = window_sum(&prefix, x - r, x + r, border, first, last);
            }
        }
    });

    let n = (2 * radius as u64 + 1).pow(2);
    let mut out = vec![0u8; w * h];
    exec.run(w, &mut out, |first_row, rows| {
        let mut col = vec![0u64; w];
        for (k, dst) in rows.chunks_mut(w).enumerate() {
            let y = (first_row + k) as i64;
            let (a, b) = (y - r, y + r);
            col.iter_mut().for_each(|c| *c = 0);
            for sy in a.max(0)..=b.min(h as i64 - 1) {
                let row = &hsum[sy as usize * w..][..w];
                col.iter_mut().zip(row).for_each(|(c, &v)| *c += v);
            }
            if border == BorderPolicy::Replicate {
                let above = (-a).max(0) as u64;
                let below = (b - (h as i64 - 1)).max(0) as u64;
                let top = &hsum[..w];
                let bottom = &hsum[(h - 1) * w..];
                for x in 0..w {
                    col[x] += above * top[x] + below * bottom[x];
                }
            }
            for (d, &sum) in dst.iter_mut().zip(&col) {
                *d = ((2 * sum + n) / (2 * n)) as u8;
            }
        }
    });
    Ok(Image::from_raw(w, h, out))
}

/// `f - box_blur(f)` before any range mapping.
pub fn unsharp_mask_signed(img: &Image, radius: usize, border: BorderPolicy) -> Result<SignedImage> {
    unsharp_mask_signed_with(&Serial, img, radius, border)
}

pub fn unsharp_mask_signed_with<E: Executor>(
    exec: &E,
    img: &Image,
    radius: usize,
    border: BorderPolicy,
) -> Result<SignedImage> {
    let blurred = box_blur_with(exec, img, radius, border)?;
    Ok(difference(exec, img, blurred.pixels().iter().map(|&b| f64::from(b))))
}

pub fn unsharp_mask(
    img: &Image,
    radius: usize,
    display: DisplayMode,
    border: BorderPolicy,
) -> Result<Image> {
    unsharp_mask_with(&Serial, img, radius, display, border)
}

pub fn unsharp_mask_with<E: Executor>(
    exec: &E,
    img: &Image,
    radius: usize,
    display: DisplayMode,
    border: BorderPolicy,
) -> Result<Image> {
    let fs = unsharp_mask_signed_with(exec, img, radius, border)?;
    Ok(clamp_to_display_with(exec, &fs, display))
}

/// `f - ∇²f`. The Laplacian stencils have a negative center, so subtracting
/// the response sharpens.
pub fn laplacian_sharpen_signed(
    img: &Image,
    variant: LaplacianVariant,
    border: BorderPolicy,
) -> SignedImage {
    laplacian_sharpen_signed_with(&Serial, img, variant, border)
}

pub fn laplacian_sharpen_signed_with<E: Executor>(
    exec: &E,
    img: &Image,
    variant: LaplacianVariant,
    border: BorderPolicy,
) -> SignedImage {
    let lap = laplacian_with(exec, img, variant, border);
    difference(exec, img, lap.values().iter().copied())
}

pub fn laplacian_sharpen(img: &Image, variant: LaplacianVariant, border: BorderPolicy) -> Image {
    laplacian_sharpen_with(&Serial, img, variant, border)
}

pub fn laplacian_sharpen_with<E: Executor>(
    exec: &E,
    img: &Image,
    variant: LaplacianVariant,
    border: BorderPolicy,
) -> Image {
    let signed = laplacian_sharpen_signed_with(exec, img, variant, border);
    clamp_to_display_with(exec, &signed, DisplayMode::Clamp)
}

fn difference<E: Executor>(
    exec: &E,
    img: &Image,
    subtrahend: impl Iterator<Item = f64>,
) -> SignedImage {
    let w = img.width();
    let sub: alloc::vec::Vec<f64> = subtrahend.collect();
    let src = img.pixels();
    let mut out = vec![0.0f64; src.len()];
    exec.run(w, &mut out, |first_row, rows| {
        let start = first_row * w;
        for (i, d) in rows.iter_mut().enumerate() {
            *d = f64::from(src[start + i]) - sub[start + i];
        }
    });
    SignedImage::from_raw(w, img.height(), out)
}
