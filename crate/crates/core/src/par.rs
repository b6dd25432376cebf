//! Execution mode for the data-parallel kernels.
//!
//! Every exhaustive loop in the crate (intersection-number checks, relation
//! comparisons, scheme construction, randomized trial batches) takes a
//! [`Parallelism`] and dispatches through the helpers below. With the
//! `parallel` feature disabled, [`Parallelism::Parallel`] runs sequentially,
//! so results never depend on the mode: all reductions are order-stable and
//! "first failure" searches return the lowest index.

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    /// Whether this mode will actually fan out to worker threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// `(0..len).map(f).collect()`, possibly in parallel, in index order.
pub(crate) fn map_range<T, F>(mode: Parallelism, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..len).map(f).collect()
}

/// First `Some` produced over `0..len` in index order.
pub(crate) fn find_map_first<T, F>(mode: Parallelism, len: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return (0..len).into_par_iter().find_map_first(f);
    }
    let _ = mode;
    (0..len).find_map(f)
}

/// Fill `out` row by row: `out[row * width..(row + 1) * width]` is passed to `f(row, slice)`.
pub(crate) fn fill_rows<T, F>(mode: Parallelism, out: &mut [T], width: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    if width == 0 {
        return;
    }
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        out.par_chunks_mut(width)
            .enumerate()
            .for_each(|(row, chunk)| f(row, chunk));
        return;
    }
    let _ = mode;
    for (row, chunk) in out.chunks_mut(width).enumerate() {
        f(row, chunk);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        for mode in [Parallelism::Sequential, Parallelism::Parallel] {
            let v = map_range(mode, 100, |i| i * i);
            assert_eq!(v[7], 49);
            assert_eq!(v.len(), 100);
            let first = find_map_first(mode, 1000, |i| (i % 37 == 36).then_some(i));
            assert_eq!(first, Some(36));
            let mut buf = vec![0usize; 12];
            fill_rows(mode, &mut buf, 4, |r, s| s.iter_mut().for_each(|x| *x = r));
            assert_eq!(buf, [0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2]);
        }
    }
}
