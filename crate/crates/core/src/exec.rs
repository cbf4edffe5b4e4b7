/// Runs a row producer over an output buffer.
///
/// `out` holds `out.len() / row_len` rows. An executor hands disjoint,
/// contiguous row ranges to `fill(first_row, rows)`; `rows.len()` is always a
/// multiple of `row_len`. Producers compute each row from immutable inputs
/// only, so any partition of the rows yields the same bytes.
pub trait Executor {
    fn run<T, F>(&self, row_len: usize, out: &mut [T], fill: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync;
}

/// Fills the whole buffer on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn run<T, F>(&self, row_len: usize, out: &mut [T], fill: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync,
    {
        debug_assert!(row_len > 0 && out.len().is_multiple_of(row_len));
        fill(0, out);
    }
}

/// Test helper: fills one row per call, exercising the partition contract.
#[cfg(test)]
pub(crate) struct RowByRow;

#[cfg(test)]
impl Executor for RowByRow {
    fn run<T, F>(&self, row_len: usize, out: &mut [T], fill: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync,
    {
        for (y, row) in out.chunks_mut(row_len).enumerate() {
            fill(y, row);
        }
    }
}
