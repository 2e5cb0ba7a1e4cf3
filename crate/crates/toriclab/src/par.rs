//! Data-parallel helpers with a sequential fallback when the `parallel` feature is off.
//! Outputs never depend on scheduling: results are concatenated in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, Ordering};

static SEQUENTIAL: AtomicBool = AtomicBool::new(false);

/// Forces the sequential path at runtime even when the `parallel` feature is on.
pub fn set_sequential(on: bool) {
    SEQUENTIAL.store(on, Ordering::Relaxed);
}

fn parallel_now() -> bool {
    cfg!(feature = "parallel") && !SEQUENTIAL.load(Ordering::Relaxed)
}

/// `f` over `lo..hi`, results flattened in index order.
pub fn flat_map_range<T, F>(lo: i64, hi: i64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(i64) -> Vec<T> + Sync + Send,
{
    if hi <= lo {
        return Vec::new();
    }
    #[cfg(feature = "parallel")]
    if parallel_now() {
        return (lo..hi).into_par_iter().flat_map_iter(f).collect();
    }
    (lo..hi).flat_map(f).collect()
}

/// `f` over a slice, results in input order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_now() {
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

pub fn is_parallel() -> bool {
    parallel_now()
}
