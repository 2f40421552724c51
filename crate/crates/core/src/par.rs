//! Thin switch between rayon data parallelism and sequential iteration.
//!
//! Every parallel driver in this crate funnels through [`run_map`] so that a
//! build without the `parallel` feature degrades to the identical sequential
//! computation, and so that benchmarks can compare both paths in one binary.
//! Results are collected in input order, which keeps reports deterministic
//! regardless of thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, in parallel when `parallel` is true and the
/// `parallel` feature is compiled in; sequentially otherwise.
pub fn run_map<T, R, F>(parallel: bool, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.par_iter().map(&f).collect();
    }
    let _ = parallel;
    items.iter().map(&f).collect()
}

/// Map `f` over the index range `0..n`, parallel on demand as in [`run_map`].
pub fn run_map_indexed<R, F>(parallel: bool, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..n).into_par_iter().map(&f).collect();
    }
    let _ = parallel;
    (0..n).map(f).collect()
}
