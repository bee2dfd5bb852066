//! Thin parallelism layer. With the default `parallel` feature the helpers
//! fan out over rayon; without it they run sequentially with identical
//! results (all reductions used here are order-independent: max, sum of
//! exact integers, or per-index writes).

/// Map `f` over `0..n` and collect the results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Reduce `f(0), ..., f(n-1)` with an associative, commutative `combine`.
pub fn reduce_indexed<T, F, C>(n: usize, identity: T, f: F, combine: C) -> T
where
    T: Send + Sync + Clone,
    F: Fn(usize) -> T + Sync + Send,
    C: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n)
            .into_par_iter()
            .map(f)
            .reduce(|| identity.clone(), &combine)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).fold(identity, combine)
    }
}

/// Fallible map over `0..n`, short-circuiting on the first error.
pub fn try_map_indexed<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
