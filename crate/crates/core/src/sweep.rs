//! Ordered evaluation of independent sweep points on a worker pool.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Maps `f` over `items`, results in input order. `workers = None` uses the
/// global pool; `Some(1)` runs inline. Each item is evaluated by a pure
/// function, so the output does not depend on the worker count.
pub(crate) fn map_ordered<T, R, F>(items: &[T], workers: Option<usize>, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match workers {
        Some(0) => Err(Error::precondition("worker count must be at least 1")),
        Some(1) => Ok(items.iter().map(f).collect()),
        None => Ok(items.par_iter().map(f).collect()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::precondition(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(|| items.par_iter().map(f).collect()))
        }
    }
}
