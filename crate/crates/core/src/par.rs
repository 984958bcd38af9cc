//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) these run on the rayon global
//! pool; without it they are plain iterator chains. Callers always receive
//! results in input order, so every reduction built on top stays
//! deterministic regardless of the thread count.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Maps `f` over an index range, preserving order.
#[cfg(feature = "parallel")]
pub fn map_range<R, F>(range: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    range.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<R, F>(range: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    range.map(f).collect()
}

/// Evaluates `f` on every index of `range` and returns the index with the
/// smallest key according to `better`, earliest index winning ties.
///
/// The index space is split into fixed-size chunks; each chunk is reduced
/// sequentially and the chunk winners are reduced in index order.
pub fn argmin_range<K, F, B>(range: Range<u64>, f: F, better: B) -> Option<(u64, K)>
where
    K: Send,
    F: Fn(u64) -> Option<K> + Sync + Send,
    B: Fn(&K, &K) -> bool + Sync + Send,
{
    const CHUNK: u64 = 1024;
    let start = range.start;
    let len = range.end.saturating_sub(start);
    let chunks = len.div_ceil(CHUNK);
    let winners = map_range(0..chunks, |c| {
        let lo = start + c * CHUNK;
        let hi = (lo + CHUNK).min(range.end);
        let mut best: Option<(u64, K)> = None;
        for i in lo..hi {
            if let Some(k) = f(i) {
                match &best {
                    Some((_, b)) if !better(&k, b) => {}
                    _ => best = Some((i, k)),
                }
            }
        }
        best
    });
    let mut best: Option<(u64, K)> = None;
    for (i, k) in winners.into_iter().flatten() {
        match &best {
            Some((_, b)) if !better(&k, b) => {}
            _ => best = Some((i, k)),
        }
    }
    best
}

/// Whether this build runs sweeps on the rayon pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmin_prefers_earliest_on_ties() {
        let keys = [5, 3, 7, 3, 9];
        let got = argmin_range(0..5, |i| Some(keys[i as usize]), |a, b| a < b);
        assert_eq!(got, Some((1, 3)));
    }

    #[test]
    fn argmin_spans_chunks() {
        let got = argmin_range(0..5000, |i| Some((i as i64 - 3210).abs()), |a, b| a < b);
        assert_eq!(got, Some((3210, 0)));
        let none = argmin_range(0..5000, |_| None::<i64>, |a, b| a < b);
        assert!(none.is_none());
    }

    #[test]
    fn map_preserves_order() {
        let v: Vec<u64> = (0..100).collect();
        assert_eq!(map_slice(&v, |x| x * 2), (0..100).map(|x| x * 2).collect::<Vec<_>>());
    }
}
