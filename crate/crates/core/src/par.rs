//! Deterministic chunked parallelism.
//!
//! Work over an index range is split into fixed-size chunks. Chunk results
//! are always returned in chunk order, so any reduction performed by the
//! caller over the returned vector is independent of the thread count.

use std::ops::Range;

/// Default chunk length for scans over discriminants.
pub const DEFAULT_CHUNK: usize = 4096;

fn chunk_ranges(range: Range<u64>, chunk: usize) -> Vec<Range<u64>> {
    assert!(chunk > 0, "chunk size must be positive");
    let chunk = chunk as u64;
    let mut out = Vec::new();
    let mut lo = range.start;
    while lo < range.end {
        let hi = lo.saturating_add(chunk).min(range.end);
        out.push(lo..hi);
        lo = hi;
    }
    out
}

/// Apply `f` to consecutive sub-ranges of `range` of length `chunk`, returning
/// the results in ascending order of sub-range.
pub fn map_chunks<R, F>(range: Range<u64>, chunk: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(Range<u64>) -> R + Sync + Send,
{
    let chunks = chunk_ranges(range, chunk);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        chunks.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        chunks.into_iter().map(f).collect()
    }
}

/// Map over a slice in fixed-size chunks, preserving order.
pub fn map_slice<T, R, F>(items: &[T], chunk: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&[T]) -> R + Sync + Send,
{
    assert!(chunk > 0, "chunk size must be positive");
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_chunks(chunk).map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.chunks(chunk).map(f).collect()
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range_in_order() {
        let parts = map_chunks(3..20, 5, |r| (r.start, r.end));
        assert_eq!(parts, vec![(3, 8), (8, 13), (13, 18), (18, 20)]);
        assert!(map_chunks(5..5, 5, |r| r.start).is_empty());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1e16);
        for _ in 0..10 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 10.0);
    }
}
