//! Data-parallel helpers. With the `parallel` feature disabled every helper
//! runs sequentially and `Execution::Parallel` is unavailable.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length for reductions; fixed so results do not depend on thread count.
const REDUCE_CHUNK: usize = 1 << 14;

/// Parallel by default when the feature is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Size the global worker pool. Fails if the pool was already built.
#[cfg(feature = "parallel")]
pub fn init_threads(threads: usize) -> Result<(), rayon::ThreadPoolBuildError> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()
}

/// Map `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
    }
}

/// `Σ_{i < len} f(i)` summed in fixed-size chunks, so sequential and parallel
/// execution give bitwise identical results.
pub fn sum<F>(exec: Execution, len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = len.div_ceil(REDUCE_CHUNK);
    let chunk_sum = |c: usize| {
        let lo = c * REDUCE_CHUNK;
        let hi = (lo + REDUCE_CHUNK).min(len);
        (lo..hi).map(&f).sum::<f64>()
    };
    let partials: Vec<f64> = match exec {
        Execution::Sequential => (0..chunks).map(chunk_sum).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..chunks).into_par_iter().map(chunk_sum).collect(),
    };
    partials.iter().sum()
}

/// Several sums over the same index range in one pass.
pub fn sum_n<const K: usize, F>(exec: Execution, len: usize, f: F) -> [f64; K]
where
    F: Fn(usize) -> [f64; K] + Sync + Send,
{
    let chunks = len.div_ceil(REDUCE_CHUNK);
    let chunk_sum = |c: usize| {
        let lo = c * REDUCE_CHUNK;
        let hi = (lo + REDUCE_CHUNK).min(len);
        let mut acc = [0.0; K];
        for i in lo..hi {
            let v = f(i);
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x;
            }
        }
        acc
    };
    let partials: Vec<[f64; K]> = match exec {
        Execution::Sequential => (0..chunks).map(chunk_sum).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..chunks).into_par_iter().map(chunk_sum).collect(),
    };
    let mut total = [0.0; K];
    for p in partials {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    total
}
