//! Ordered parallel map. Results always come back in index order, so any
//! reduction done by the caller is deterministic regardless of scheduling.

use alloc::vec::Vec;

#[cfg(feature = "std")]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "std"))]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Number of chunks to split `total` items into. Independent of the thread
/// count so that chunked floating-point sums are reproducible everywhere.
pub fn chunk_count(total: u128) -> usize {
    total.clamp(1, 4096) as usize
}
