//! Execution strategy for the data-parallel inner loops.
//!
//! With the `parallel` feature (the default) the hot loops run on the rayon
//! thread pool; without it, or with [`Execution::Sequential`], everything runs
//! on the calling thread. Both paths perform identical arithmetic in an
//! identical per-point order, so results are bitwise independent of the
//! strategy and the worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chooses how data-parallel regions are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    /// Use the rayon pool. Falls back to sequential execution when the
    /// `parallel` feature is disabled.
    Parallel,
    Sequential,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Applies `f` to consecutive chunks of `data`, passing the chunk index.
pub(crate) fn for_each_chunk_mut<T, F>(exec: Execution, data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        data.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i, c));
        return;
    }
    let _ = exec;
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

/// Maps `0..n` through `f`, collecting results in index order.
pub(crate) fn map_indexed<R, F>(exec: Execution, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Maps fallibly over `0..n`, collecting results in index order.
pub(crate) fn try_map_indexed<R, E, F>(
    exec: Execution,
    n: usize,
    f: F,
) -> std::result::Result<Vec<R>, E>
where
    R: Send,
    E: Send,
    F: Fn(usize) -> std::result::Result<R, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}
