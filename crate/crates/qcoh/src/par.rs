//! Execution helpers for the fan-out points (multi-start searches and
//! ensemble sweeps).
//!
//! With the `parallel` feature (on by default) these dispatch to rayon;
//! without it they fall back to plain sequential loops. Results are always
//! returned in input order, so a run is reproducible regardless of thread
//! count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to `0..n`, preserving index order in the output.
pub fn ordered_collect<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential twin of [`ordered_collect`], available in every build. It is
/// the fallback used when the `parallel` feature is off and serves as the
/// baseline in the benchmark suite.
pub fn ordered_collect_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Caps the global worker pool at `n` threads. Returns `false` when the pool
/// was already initialized (rayon allows exactly one global configuration) or
/// when the crate was built without the `parallel` feature, in which case
/// execution is sequential anyway.
pub fn configure_threads(n: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        false
    }
}
