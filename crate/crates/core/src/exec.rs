//! Serial and data-parallel evaluation of range reductions.
//!
//! Every parallel loop in the crate is a sum of `u64` hit counts over
//! disjoint chunks of an index range, so the result never depends on how
//! the work is scheduled.

use std::ops::Range;

/// How a data-parallel loop is executed.
///
/// Without the `parallel` feature, [`Execution::Parallel`] silently runs
/// serially.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run work in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Splits `range` into `chunk`-sized pieces, evaluates `f` on each and
/// returns the sum.
pub(crate) fn sum_chunks<F>(range: Range<u64>, chunk: u64, exec: Execution, f: F) -> u64
where
    F: Fn(Range<u64>) -> u64 + Sync + Send,
{
    let chunk = chunk.max(1);
    let start = range.start;
    let len = range.end.saturating_sub(start);
    let pieces = len.div_ceil(chunk);
    let piece = move |i: u64| {
        let lo = start + i * chunk;
        let hi = (lo + chunk).min(range.end);
        lo..hi
    };

    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..pieces).into_par_iter().map(|i| f(piece(i))).sum()
        }
        _ => (0..pieces).map(|i| f(piece(i))).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serial_and_parallel_sums_agree() {
        let f = |r: Range<u64>| r.map(|x| x % 7).sum::<u64>();
        for chunk in [1, 3, 64, 1000, 5000] {
            let a = sum_chunks(0..4321, chunk, Execution::Serial, f);
            let b = sum_chunks(0..4321, chunk, Execution::Parallel, f);
            assert_eq!(a, b);
            assert_eq!(a, (0..4321u64).map(|x| x % 7).sum::<u64>());
        }
    }

    #[test]
    fn empty_range_is_zero() {
        assert_eq!(sum_chunks(5..5, 10, Execution::Parallel, |r| r.end - r.start), 0);
    }
}
