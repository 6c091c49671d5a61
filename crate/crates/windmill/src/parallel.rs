//! Thread-pool helpers honouring `WINDMILL_THREADS`.

use rayon::prelude::*;
use rayon::ThreadPool;

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "WINDMILL_THREADS";

/// Worker count: the machine's parallelism, capped by `WINDMILL_THREADS`
/// when it holds a positive integer.
pub fn worker_count() -> usize {
    let available = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var(THREADS_VAR).ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        Some(cap) if cap > 0 => cap.min(available),
        _ => available,
    }
}

/// A pool sized by [`worker_count`].
pub fn pool() -> ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .expect("thread pool")
}

/// Maps `f` over `items` in parallel, preserving order.
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    pool().install(|| items.into_par_iter().map(f).collect())
}
