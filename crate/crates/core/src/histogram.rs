//! 256-bin gray-level histograms and their bar-chart rendering.

use alloc::vec;

use crate::image::{Image, GRAY_LEVELS, MAX_GRAY};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Histogram {
    bins: [u64; GRAY_LEVELS],
}

impl Histogram {
    pub fn bins(&self) -> &[u64; GRAY_LEVELS] {
        &self.bins
    }

    pub fn count(&self, level: u8) -> u64 {
        self.bins[level as usize]
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().sum()
    }

    pub fn max_count(&self) -> u64 {
        self.bins.iter().copied().max().unwrap_or(0)
    }
}

pub fn compute_histogram(img: &Image) -> Histogram {
    let mut bins = [0u64; GRAY_LEVELS];
    for &p in img.pixels() {
        bins[p as usize] += 1;
    }
    Histogram { bins }
}

pub const CHART_HEIGHT: usize = 100;

/// 256 x 100 bar chart: white background, one black column per level with
/// height `round(100 * count / max_count)`, growing up from the bottom row.
pub fn render_histogram(h: &Histogram) -> Image {
    let mut pixels = vec![MAX_GRAY; GRAY_LEVELS * CHART_HEIGHT];
    let max = h.max_count();
    if max > 0 {
        let scale = CHART_HEIGHT as u128;
        let max = u128::from(max);
        for (level, &count) in h.bins.iter().enumerate() {
            // half-up rounding in integers
            let bar = ((2 * scale * u128::from(count) + max) / (2 * max)) as usize;
            for row in CHART_HEIGHT - bar..CHART_HEIGHT {
                pixels[row * GRAY_LEVELS + level] = 0;
            }
        }
    }
    Image::from_raw(GRAY_LEVELS, CHART_HEIGHT, pixels)
}
