//! Data-parallel helpers. With the `parallel` feature the maps run on rayon;
//! without it (or after `set_sequential(true)`) they run in order on the caller.
//! Output order always matches input order.

use std::sync::atomic::{AtomicBool, Ordering};

static FORCE_SEQ: AtomicBool = AtomicBool::new(false);

/// Runtime override used by the benches to time both paths in one binary.
pub fn set_sequential(on: bool) {
    FORCE_SEQ.store(on, Ordering::SeqCst);
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQ.load(Ordering::SeqCst)
}

/// Reads TROPLIFT_THREADS once and sizes the global pool accordingly.
#[cfg(feature = "parallel")]
pub fn init_threads() {
    use std::sync::Once;
    static INIT: Once = Once::new();
    INIT.call_once(|| {
        let n = std::env::var("TROPLIFT_THREADS")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0);
        if let Some(n) = n {
            // a pool may already exist (tests, embedding apps); that is fine
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    });
}

#[cfg(not(feature = "parallel"))]
pub fn init_threads() {}

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if is_parallel() && items.len() > 1 {
            use rayon::prelude::*;
            init_threads();
            return items.par_iter().map(f).collect();
        }
    }
    items.iter().map(f).collect()
}

/// `map` over an index range.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if is_parallel() && n > 1 {
            use rayon::prelude::*;
            init_threads();
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    (0..n).map(f).collect()
}

/// True iff `pred` holds for every item; short-circuits in both modes.
pub fn all<T, F>(items: &[T], pred: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if is_parallel() && items.len() > 1 {
            use rayon::prelude::*;
            init_threads();
            return items.par_iter().all(pred);
        }
    }
    items.iter().all(pred)
}
