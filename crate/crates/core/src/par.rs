//! Ordered data-parallel map over independent work items.
//!
//! With the `parallel` feature (on by default) work is spread over a rayon
//! pool; without it every [`Execution`] runs sequentially. Results always
//! come back in index order, so output never depends on scheduling.

use std::env;

/// Environment variable that caps the worker count for parallel runs.
pub const THREADS_ENV: &str = "STEERKIT_THREADS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// `threads: None` uses the global rayon pool.
    #[default]
    Parallel,
    ParallelWith { threads: usize },
}

impl Execution {
    /// Reads [`THREADS_ENV`]; unset or unparsable falls back to the global
    /// pool, `1` means sequential.
    pub fn from_env() -> Self {
        match env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok()) {
            Some(0) | None => Execution::Parallel,
            Some(1) => Execution::Sequential,
            Some(n) => Execution::ParallelWith { threads: n },
        }
    }
}

/// `(0..len).map(f)` collected in order, evaluated according to `exec`.
pub fn map_indexed<T, F>(len: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..len).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..len).into_par_iter().map(f).collect()
        }
        #[cfg(feature = "parallel")]
        Execution::ParallelWith { threads } => {
            use rayon::prelude::*;
            match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
                Ok(pool) => pool.install(|| (0..len).into_par_iter().map(&f).collect()),
                Err(_) => (0..len).map(f).collect(),
            }
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel | Execution::ParallelWith { .. } => (0..len).map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = map_indexed(1000, Execution::Sequential, |i| i * i);
        assert_eq!(map_indexed(1000, Execution::Parallel, |i| i * i), seq);
        assert_eq!(map_indexed(1000, Execution::ParallelWith { threads: 3 }, |i| i * i), seq);
        assert!(map_indexed(0, Execution::Parallel, |i| i).is_empty());
    }
}
