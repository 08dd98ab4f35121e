//! Data-parallel helpers.
//!
//! With the `parallel` feature enabled and more than one worker requested the
//! closures run on a rayon pool; otherwise they run on the calling thread in
//! order. Results are always returned in input order, so callers observe the
//! same values either way.

use std::sync::OnceLock;

/// Number of workers requested by the caller. `0` means "all cores".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Workers(pub usize);

impl Workers {
    pub const SEQUENTIAL: Workers = Workers(1);
    pub const ALL: Workers = Workers(0);

    pub fn is_sequential(self) -> bool {
        !cfg!(feature = "parallel") || self.resolved() == 1
    }

    /// The concrete thread count this request maps to.
    pub fn resolved(self) -> usize {
        if self.0 > 0 {
            return self.0;
        }
        static CORES: OnceLock<usize> = OnceLock::new();
        *CORES.get_or_init(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

impl Default for Workers {
    fn default() -> Self {
        Workers::ALL
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(workers: Workers, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if workers.is_sequential() {
        return items.iter().map(f).collect();
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        install(workers, || items.par_iter().map(&f).collect())
    }
    #[cfg(not(feature = "parallel"))]
    unreachable!()
}

/// Returns the first (in input order) `Some` produced by `f`.
pub fn find_map_first<T, R, F>(workers: Workers, items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    if workers.is_sequential() {
        return items.iter().find_map(f);
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        install(workers, || items.par_iter().find_map_first(&f))
    }
    #[cfg(not(feature = "parallel"))]
    unreachable!()
}

/// Maps over the integer range `0..len`, preserving order.
pub fn map_range<R, F>(workers: Workers, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    if workers.is_sequential() {
        return (0..len).map(f).collect();
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        install(workers, || (0..len).into_par_iter().map(&f).collect())
    }
    #[cfg(not(feature = "parallel"))]
    unreachable!()
}

#[cfg(feature = "parallel")]
fn install<R: Send>(workers: Workers, op: impl FnOnce() -> R + Send) -> R {
    if workers.0 == 0 {
        return op();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers.0).build() {
        Ok(pool) => pool.install(op),
        Err(_) => op(),
    }
}
