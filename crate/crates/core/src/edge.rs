//! Binary edges, saturating addition, and the directional shadow rendering.

use alloc::vec;

use crate::conv::{correlate_with, BorderPolicy, Kernel};
use crate::error::{Error, Result};
use crate::exec::{Executor, Serial};
use crate::image::{saturate, BinaryImage, Image, MAX_GRAY};
use crate::point::negate_with;

/// Binarization cut: levels `>= t` become 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Threshold(pub u8);

impl Default for Threshold {
    fn default() -> Self {
        Threshold(128)
    }
}

pub fn binarize(img: &Image, th: Threshold) -> BinaryImage {
    binarize_with(&Serial, img, th)
}

pub fn binarize_with<E: Executor>(exec: &E, img: &Image, th: Threshold) -> BinaryImage {
    let w = img.width();
    let src = img.pixels();
    let mut bits = vec![0u8; src.len()];
    exec.run(w, &mut bits, |first_row, rows| {
        let start = first_row * w;
        for (b, &p) in rows.iter_mut().zip(&src[start..]) {
            *b = u8::from(p >= th.0);
        }
    });
    BinaryImage::from_raw(w, img.height(), bits)
}

/// 1 → 255, 0 → 0.
pub fn render_binary(b: &BinaryImage) -> Image {
    Image::from_raw(
        b.width(),
        b.height(),
        b.bits().iter().map(|&v| v * MAX_GRAY).collect(),
    )
}

/// `g = 1` where a pixel differs (XOR) from at least one of its up, down,
/// left or right neighbors. Neighbors outside the image never differ.
pub fn edge_map(u: &BinaryImage) -> BinaryImage {
    edge_map_with(&Serial, u)
}

pub fn edge_map_with<E: Executor>(exec: &E, u: &BinaryImage) -> BinaryImage {
    let (w, h) = (u.width(), u.height());
    let bits = u.bits();
    let mut g = vec![0u8; bits.len()];
    exec.run(w, &mut g, |first_row, rows| {
        for (k, out) in rows.chunks_mut(w).enumerate() {
            let y = first_row + k;
            let row = &bits[y * w..][..w];
            let up = (y > 0).then(|| &bits[(y - 1) * w..][..w]);
            let down = (y + 1 < h).then(|| &bits[(y + 1) * w..][..w]);
            for (x, o) in out.iter_mut().enumerate() {
                let c = row[x];
                let mut diff = 0;
                if x > 0 {
                    diff |= c ^ row[x - 1];
                }
                if x + 1 < w {
                    diff |= c ^ row[x + 1];
                }
                if let Some(up) = up {
                    diff |= c ^ up[x];
                }
                if let Some(down) = down {
                    diff |= c ^ down[x];
                }
                *o = diff;
            }
        }
    });
    BinaryImage::from_raw(w, h, g)
}

/// Black pixels with at least one white 4-neighbor: `u = 0` and `g = 1`.
pub fn edge_points(u: &BinaryImage) -> BinaryImage {
    edge_points_with(&Serial, u)
}

pub fn edge_points_with<E: Executor>(exec: &E, u: &BinaryImage) -> BinaryImage {
    let g = edge_map_with(exec, u);
    let w = u.width();
    let mut out = g.bits().to_vec();
    exec.run(w, &mut out, |first_row, rows| {
        let start = first_row * w;
        for (o, &b) in rows.iter_mut().zip(&u.bits()[start..]) {
            *o &= b ^ 1;
        }
    });
    BinaryImage::from_raw(w, u.height(), out)
}

/// Pixelwise `min(a + b, 255)`.
pub fn image_add(a: &Image, b: &Image) -> Result<Image> {
    image_add_with(&Serial, a, b)
}

pub fn image_add_with<E: Executor>(exec: &E, a: &Image, b: &Image) -> Result<Image> {
    if !a.same_dimensions(b) {
        return Err(Error::DimensionMismatch {
            left_width: a.width(),
            left_height: a.height(),
            right_width: b.width(),
            right_height: b.height(),
        });
    }
    let w = a.width();
    let mut out = vec![0u8; a.pixels().len()];
    exec.run(w, &mut out, |first_row, rows| {
        let start = first_row * w;
        let lhs = &a.pixels()[start..];
        let rhs = &b.pixels()[start..];
        for (o, (&p, &q)) in rows.iter_mut().zip(lhs.iter().zip(rhs)) {
            *o = p.saturating_add(q);
        }
    });
    Ok(Image::from_raw(w, a.height(), out))
}

/// Mid-gray bias added to the directional difference.
pub const SHADOW_BIAS: f64 = 128.0;

/// North-east neighbor minus south-west neighbor.
pub fn shadow_kernel() -> Kernel {
    Kernel::from_rows([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
        .expect("shadow stencil is a valid kernel")
}

/// Relief rendering lit along the north-east diagonal: flat areas become
/// 128, steps along that diagonal turn into highlights or shadows.
pub fn shadow_ne(img: &Image) -> Image {
    shadow_ne_with(&Serial, img)
}

pub fn shadow_ne_with<E: Executor>(exec: &E, img: &Image) -> Image {
    let diff = correlate_with(exec, img, &shadow_kernel(), BorderPolicy::Replicate);
    let w = img.width();
    let mut out = vec![0u8; diff.values().len()];
    exec.run(w, &mut out, |first_row, rows| {
        let start = first_row * w;
        for (o, &v) in rows.iter_mut().zip(&diff.values()[start..]) {
            *o = saturate(SHADOW_BIAS + v);
        }
    });
    Image::from_raw(w, img.height(), out)
}

pub fn shadow_invert(img: &Image) -> Image {
    shadow_invert_with(&Serial, img)
}

pub fn shadow_invert_with<E: Executor>(exec: &E, img: &Image) -> Image {
    negate_with(exec, &shadow_ne_with(exec, img))
}
