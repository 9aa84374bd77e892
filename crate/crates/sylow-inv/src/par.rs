//! Data-parallel helpers. With the `parallel` feature (default) the work is
//! spread over rayon; without it the same entry points run sequentially, so
//! callers never branch on the feature themselves. The `parallel` argument
//! lets benchmarks compare both paths inside one binary.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_collect<T, U, F>(parallel: bool, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.into_par_iter().map(f).collect();
    }
    let _ = parallel;
    items.into_iter().map(f).collect()
}

/// True when the parallel path is actually compiled in.
pub fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}
