//! Data-parallel fan-out with a sequential fallback.
//!
//! Spectrum cells and oracle slices are independent, so they map cleanly onto
//! rayon's indexed parallel iterators (which preserve output order, keeping
//! results deterministic). Building without the `parallel` feature swaps in a
//! plain sequential loop with identical semantics.

/// Maps `f` over `items`, in parallel when the `parallel` feature is enabled.
/// Output order always matches input order.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Sequential map with the same signature, kept available in all builds so
/// benchmarks can compare the two paths side by side.
pub fn map_sequential<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
