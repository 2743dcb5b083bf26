//! Ordered fan-out over independent work items.
//!
//! With the `parallel` feature the items run on a rayon pool sized by
//! `jobs`; otherwise, or when `jobs <= 1`, they run sequentially. Results
//! always come back in input order.

/// Worker count from `available_parallelism`, at least 1.
pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

pub fn map_ordered<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if jobs > 1 && items.len() > 1 {
        use rayon::prelude::*;
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => {
                return pool.install(|| {
                    items
                        .par_iter()
                        .enumerate()
                        .map(|(i, t)| f(i, t))
                        .collect()
                })
            }
            Err(e) => log::warn!("falling back to sequential execution: {e}"),
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
    map_sequential(items, f)
}

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(usize, &T) -> R,
{
    items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
}
