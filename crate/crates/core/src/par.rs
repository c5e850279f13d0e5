//! Data-parallel folds over integer index ranges.
//!
//! With the `parallel` feature the work is split across a rayon pool;
//! without it, or with [`Workers::Sequential`], the same fold runs on the
//! calling thread. Callers only pass associative, commutative reductions,
//! so the result does not depend on how the range was partitioned.

use std::ops::Range;

/// How many threads an enumeration may use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Workers {
    /// The global rayon pool (all cores).
    #[default]
    Auto,
    Sequential,
    /// A dedicated pool of exactly this many threads. Inside an existing
    /// rayon worker the current pool is reused instead.
    Threads(usize),
}

impl Workers {
    pub fn from_count(n: usize) -> Self {
        match n {
            0 => Workers::Auto,
            1 => Workers::Sequential,
            n => Workers::Threads(n),
        }
    }

    pub fn is_sequential(self) -> bool {
        matches!(self, Workers::Sequential) || !cfg!(feature = "parallel")
    }
}

/// Folds `fold` over every index in `range`, combining partial states with
/// `reduce`.
pub fn fold_range<A, I, F, R>(
    workers: Workers,
    range: Range<u64>,
    identity: I,
    fold: F,
    reduce: R,
) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, u64) -> A + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    if workers.is_sequential() {
        return range.fold(identity(), fold);
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = || {
            range
                .into_par_iter()
                .fold(&identity, &fold)
                .reduce(&identity, &reduce)
        };
        match workers {
            Workers::Threads(n) if rayon::current_thread_index().is_none() => {
                match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                    Ok(pool) => pool.install(run),
                    Err(_) => run(),
                }
            }
            _ => run(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = reduce;
        unreachable!("sequential without the parallel feature")
    }
}

/// Maps every index of `range` in order, preserving output order.
pub fn map_range<T, F>(workers: Workers, range: Range<u64>, map: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if workers.is_sequential() {
        return range.map(map).collect();
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = || range.into_par_iter().map(&map).collect();
        match workers {
            Workers::Threads(n) if rayon::current_thread_index().is_none() => {
                match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                    Ok(pool) => pool.install(run),
                    Err(_) => run(),
                }
            }
            _ => run(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    unreachable!("sequential without the parallel feature")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_matches_sequential() {
        let seq = fold_range(
            Workers::Sequential,
            0..10_000,
            || 0u64,
            |a, i| a + i * i,
            |a, b| a + b,
        );
        for w in [Workers::Auto, Workers::Threads(3)] {
            assert_eq!(
                fold_range(w, 0..10_000, || 0u64, |a, i| a + i * i, |a, b| a + b),
                seq
            );
        }
    }

    #[test]
    fn map_preserves_order() {
        let v = map_range(Workers::Threads(4), 0..1000, |i| i * 2);
        assert_eq!(v, (0..1000).map(|i| i * 2).collect::<Vec<_>>());
    }
}
