//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the hot loops (minor
//! enumeration, family sampling, Horn inequality sweeps) run on rayon.
//! Without it, or with [`Exec::Sequential`], they run on the calling thread.
//! Every parallel map preserves input order, so results never depend on the
//! schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Exec::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Order-preserving map.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => items.into_iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.into_par_iter().map(f).collect(),
        }
    }

    /// True iff `pred` holds for every item.
    pub fn all<T, F>(self, items: &[T], pred: F) -> bool
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().all(pred),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().all(pred),
        }
    }
}

/// Runs `f` with at most `threads` worker threads. `threads <= 1` forces the
/// sequential path.
pub fn with_threads<R, F>(threads: usize, f: F) -> R
where
    R: Send,
    F: FnOnce(Exec) -> R + Send,
{
    if threads <= 1 {
        return f(Exec::Sequential);
    }
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| f(Exec::Parallel)),
            Err(_) => f(Exec::Parallel),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        f(Exec::Sequential)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let items: Vec<u64> = (0..1000).collect();
        let expected: Vec<u64> = items.iter().map(|x| x * x).collect();
        assert_eq!(Exec::default().map(items.clone(), |x| x * x), expected);
        assert_eq!(Exec::Sequential.map(items, |x| x * x), expected);
    }

    #[test]
    fn with_threads_runs() {
        let total: u64 = with_threads(3, |exec| exec.map((1..=10u64).collect(), |x| x).iter().sum());
        assert_eq!(total, 55);
        assert!(with_threads(1, |exec| exec == Exec::Sequential));
    }
}
