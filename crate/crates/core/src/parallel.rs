//! Per-cell loops that optionally run on the rayon thread pool.

use rayon::prelude::*;

use crate::error::Result;

/// `(0..n).map(f).collect()`, in parallel when requested. The first error in
/// index order is returned.
pub(crate) fn map_indices<T, F>(n: usize, parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}
