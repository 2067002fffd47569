//! Deterministic chunked execution for sampling loops.
//!
//! Work is split into fixed-size chunks whose boundaries depend only on the
//! total count, never on the thread pool. Each chunk gets its own random
//! stream derived from `(seed, chunk index)`, and chunk results are
//! concatenated in index order, so sequential and parallel runs agree
//! bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Samples per chunk.
pub const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    /// Rayon thread pool. Falls back to sequential when the crate is built
    /// without the `parallel` feature.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Random stream for one chunk.
pub fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Runs `f(chunk_index, range)` over `0..total` in chunks and concatenates
/// the per-chunk outputs in chunk order.
pub fn run_chunks<T, F>(exec: Exec, total: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, std::ops::Range<usize>) -> Vec<T> + Sync + Send,
{
    let n_chunks = total.div_ceil(CHUNK);
    let range_of = |c: usize| c * CHUNK..((c + 1) * CHUNK).min(total);
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            let parts: Vec<Vec<T>> = (0..n_chunks)
                .into_par_iter()
                .map(|c| f(c, range_of(c)))
                .collect();
            parts.into_iter().flatten().collect()
        }
        _ => (0..n_chunks).flat_map(|c| f(c, range_of(c))).collect(),
    }
}

/// Order-preserving map over a slice.
pub fn map<I, T, F>(exec: Exec, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn chunking_is_independent_of_execution_mode() {
        let draw = |c: usize, r: std::ops::Range<usize>| {
            let mut rng = chunk_rng(42, c);
            r.map(|i| (i, rng.gen::<u64>())).collect::<Vec<_>>()
        };
        let a = run_chunks(Exec::Sequential, 3 * CHUNK + 17, draw);
        let b = run_chunks(Exec::Parallel, 3 * CHUNK + 17, draw);
        assert_eq!(a.len(), 3 * CHUNK + 17);
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].0 + 1 == w[1].0));
    }

    #[test]
    fn empty_total() {
        let v: Vec<u8> = run_chunks(Exec::Parallel, 0, |_, r| r.map(|_| 0u8).collect());
        assert!(v.is_empty());
    }
}
