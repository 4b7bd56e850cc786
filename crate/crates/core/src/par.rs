//! Execution mode switch for the data-parallel kernels.
//!
//! With the `parallel` feature the kernels fan out over rayon unless the
//! process-wide mode is set to [`Execution::Sequential`]. Without the feature
//! everything runs on the calling thread. Output order never depends on the mode.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

static MODE: AtomicU8 = AtomicU8::new(1);

pub fn set_execution(mode: Execution) {
    MODE.store(
        match mode {
            Execution::Sequential => 0,
            Execution::Parallel => 1,
        },
        Ordering::Relaxed,
    );
}

pub fn execution() -> Execution {
    if cfg!(feature = "parallel") && MODE.load(Ordering::Relaxed) == 1 {
        Execution::Parallel
    } else {
        Execution::Sequential
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if execution() == Execution::Parallel && items.len() > 1 {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if execution() == Execution::Parallel && n > 1 {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}
