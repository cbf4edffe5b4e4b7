//! Convolution micro-benchmark with a determinism checksum.

use std::fmt;
use std::time::{Duration, Instant};

use grayfilter_core::conv::correlate_with;
use grayfilter_core::{BorderPolicy, Error as FilterError, Executor, Image, Kernel, SignedImage};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0xC0FFEE;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub size: usize,
    pub ksize: usize,
    pub iters: usize,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), FilterError> {
        let bad = |name, reason| Err(FilterError::InvalidParameter { name, reason });
        if self.size == 0 {
            return bad("size", "must be positive");
        }
        if self.ksize == 0 || self.ksize.is_multiple_of(2) {
            return bad("ksize", "must be odd and positive");
        }
        if self.iters == 0 {
            return bad("iters", "must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub threads: usize,
    pub min: Duration,
    pub median: Duration,
    /// Image pixels times kernel taps per second, in millions.
    pub mpix_kernel_ops_per_sec: f64,
    pub checksum: i64,
}

/// `size x size` bytes from a ChaCha8 stream seeded with [`SEED`].
pub fn bench_image(size: usize) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut pixels = vec![0u8; size * size];
    rng.fill_bytes(&mut pixels);
    Image::new(size, size, pixels).expect("size is positive")
}

/// Wrapping sum of the output values. Ones kernels on 8-bit input give
/// integer outputs, so the sum is exact.
pub fn checksum(s: &SignedImage) -> i64 {
    s.values().iter().fold(0i64, |acc, &v| acc.wrapping_add(v as i64))
}

pub fn bench_convolve<E: Executor>(
    exec: &E,
    threads: usize,
    config: BenchConfig,
) -> Result<BenchReport, FilterError> {
    config.validate()?;
    let img = bench_image(config.size);
    let kernel = Kernel::ones(config.ksize)?;
    let mut times = Vec::with_capacity(config.iters);
    let mut last = None;
    for _ in 0..config.iters {
        let start = Instant::now();
        let out = correlate_with(exec, &img, &kernel, BorderPolicy::Replicate);
        times.push(start.elapsed());
        last = Some(out);
    }
    times.sort();
    let min = times[0];
    let median = times[times.len() / 2];
    let ops = (config.size * config.size) as f64 * (config.ksize * config.ksize) as f64;
    let secs = median.as_secs_f64().max(1e-9);
    Ok(BenchReport {
        config,
        threads,
        min,
        median,
        mpix_kernel_ops_per_sec: ops / secs / 1e6,
        checksum: checksum(&last.expect("iters > 0")),
    })
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "bench convolve size={} ksize={} iters={} threads={}",
            c.size, c.ksize, c.iters, self.threads
        )?;
        writeln!(f, "min_ms={:.4}", self.min.as_secs_f64() * 1e3)?;
        writeln!(f, "median_ms={:.4}", self.median.as_secs_f64() * 1e3)?;
        writeln!(f, "mpix_kernel_ops_per_sec={:.2}", self.mpix_kernel_ops_per_sec)?;
        writeln!(f, "checksum={}", self.checksum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use grayfilter_core::Serial;

    fn run(size: usize, ksize: usize, iters: usize) -> BenchReport {
        bench_convolve(&Serial, 1, BenchConfig { size, ksize, iters }).unwrap()
    }

    #[test]
    fn repeatable() {
        assert_eq!(run(32, 3, 2).checksum, run(32, 3, 3).checksum);
        assert_eq!(bench_image(16), bench_image(16));
    }

    #[test]
    fn degenerate_case_is_the_pixel() {
        let px = bench_image(1).pixels()[0];
        assert_eq!(run(1, 1, 1).checksum, i64::from(px));
    }

    #[test]
    fn rejects_bad_parameters() {
        for (size, ksize, iters) in [(0, 3, 1), (8, 2, 1), (8, 0, 1), (8, 3, 0)] {
            let e = bench_convolve(&Serial, 1, BenchConfig { size, ksize, iters }).unwrap_err();
            assert!(e.is_parameter());
        }
    }

    #[test]
    fn report_lists_checksum() {
        let text = run(4, 3, 1).to_string();
        assert!(text.lines().any(|l| l.starts_with("checksum=")));
        assert!(text.contains("median_ms="));
    }
}
