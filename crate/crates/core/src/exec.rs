//! Parallelism hint threaded through the data-parallel sweeps.
//!
//! With the `parallel` feature enabled, [`Exec::Parallel`] runs on the
//! ambient rayon pool (callers that need a bounded pool wrap the call in
//! `ThreadPool::install`). Without the feature every sweep runs on the
//! calling thread. Results never depend on the mode: reductions are either
//! order-independent or collected in index order.

/// How a sweep should be executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this build can actually run work in parallel.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps `f` over `0..n`, preserving index order in the output.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Maps `f` over a slice, preserving order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Folds `0..n` into per-worker accumulators and merges them.
    ///
    /// `merge` must be associative and commutative for the result to be
    /// independent of scheduling.
    pub fn fold_range<A, Init, Fold, Merge>(self, n: usize, init: Init, fold: Fold, merge: Merge) -> A
    where
        A: Send,
        Init: Fn() -> A + Sync + Send,
        Fold: Fn(A, usize) -> A + Sync + Send,
        Merge: Fn(A, A) -> A + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..n)
                .into_par_iter()
                .fold(&init, &fold)
                .reduce(&init, &merge);
        }
        let _ = &merge;
        (0..n).fold(init(), fold)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let seq = Exec::Sequential.map_range(100, |i| i * i);
        let par = Exec::Parallel.map_range(100, |i| i * i);
        assert_eq!(seq, par);
        let s = Exec::Sequential.fold_range(1000, || 0u64, |a, i| a + i as u64, |a, b| a + b);
        let p = Exec::Parallel.fold_range(1000, || 0u64, |a, i| a + i as u64, |a, b| a + b);
        assert_eq!(s, p);
        assert_eq!(s, 499_500);
    }
}
