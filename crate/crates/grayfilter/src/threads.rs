use std::num::NonZeroUsize;
use std::thread;

use grayfilter_core::Executor;

/// Splits the output rows into one contiguous block per thread.
///
/// Each row is computed by the same code whatever block it lands in, so the
/// result does not depend on the thread count.
#[derive(Clone, Copy, Debug)]
pub struct Threaded {
    threads: NonZeroUsize,
}

impl Threaded {
    /// `0` is treated as `1`.
    pub fn new(threads: usize) -> Self {
        Threaded {
            threads: NonZeroUsize::new(threads).unwrap_or(NonZeroUsize::MIN),
        }
    }

    /// One thread per available core.
    pub fn available() -> Self {
        Threaded {
            threads: thread::available_parallelism().unwrap_or(NonZeroUsize::MIN),
        }
    }

    pub fn threads(&self) -> usize {
        self.threads.get()
    }
}

impl Default for Threaded {
    fn default() -> Self {
        Threaded::available()
    }
}

impl Executor for Threaded {
    fn run<T, F>(&self, row_len: usize, out: &mut [T], fill: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync,
    {
        let rows = out.len() / row_len.max(1);
        let workers = self.threads.get().min(rows);
        if workers <= 1 {
            fill(0, out);
            return;
        }
        let per = rows.div_ceil(workers);
        let fill = &fill;
        thread::scope(|s| {
            for (i, block) in out.chunks_mut(per * row_len).enumerate() {
                s.spawn(move || fill(i * per, block));
            }
        });
    }
}
