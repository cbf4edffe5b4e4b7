//! Grayscale spatial-domain filtering on 8-bit rasters.
//!
//! Everything here is pure computation over in-memory buffers and builds
//! without `std` (only `alloc` is required). Every filter is expressed as a
//! row producer handed to an [`Executor`], so callers that have threads can
//! split the work without changing a single output bit. The serial entry
//! points (`negate`, `correlate`, ...) use [`Serial`]; the `*_with` variants
//! take any executor.
//!
//! Filtering results that can leave the `[0, 255]` range are returned as a
//! [`SignedImage`] and mapped back to gray levels explicitly, either with
//! [`clamp_to_display`] or by the operation's own final clamp.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod exec;
mod image;

pub mod conv;
pub mod edge;
pub mod enhance;
pub mod histogram;
pub mod point;

pub use crate::conv::{
    clamp_to_display, convolve, correlate, laplacian, rot180, BorderPolicy, DisplayMode, Kernel,
    LaplacianVariant,
};
pub use crate::edge::{
    binarize, edge_map, edge_points, image_add, render_binary, shadow_invert, shadow_ne, Threshold,
};
pub use crate::enhance::{box_blur, laplacian_sharpen, unsharp_mask};
pub use crate::error::{Error, Result};
pub use crate::exec::{Executor, Serial};
pub use crate::histogram::{compute_histogram, render_histogram, Histogram};
pub use crate::image::{
    clamp_round, BinaryImage, Dimensions, Image, SignedImage, GRAY_LEVELS, MAX_GRAY,
};
pub use crate::point::{apply_lut, gray_stretch, negate, Lut};
