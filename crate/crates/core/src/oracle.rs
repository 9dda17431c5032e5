//! Exhaustive enumeration oracles.
//!
//! Nothing here knows about Fibonacci numbers. Strings are enumerated as
//! the integers `0..d^L` read as little-endian base-`d` digit vectors, and
//! the allowed-set predicate is applied by scanning for the substring `11`.

use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exec::{sum_chunks, Execution};
use crate::pattern::{AllowedCount, PatternSpec, Placement, Segment};
use crate::{Error, ExactRational, Result};

/// Default enumeration budget: `d^L <= 2^26`.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

const DISTINGUISHED: u8 = 1;
const CHUNK: u64 = 1 << 14;

/// 0-based starts of every (possibly overlapping) `11` in `symbols`.
fn pair_starts(symbols: &[u8]) -> impl Iterator<Item = usize> + '_ {
    symbols
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] == DISTINGUISHED && w[1] == DISTINGUISHED)
        .map(|(i, _)| i)
}

/// Whether one segment's symbols satisfy its placement.
pub fn segment_allows(symbols: &[u8], placement: Placement) -> bool {
    let mut starts = pair_starts(symbols);
    let first = match starts.next() {
        Some(i) => i,
        None => return false,
    };
    if starts.next().is_some() {
        return false;
    }
    let len = symbols.len();
    match placement {
        Placement::AtEnd => first + 2 == len,
        Placement::AtStart => first == 0,
        Placement::AtPosition(k) => first + 1 == k as usize,
        Placement::AnywhereOnce => true,
    }
}

/// The allowed-set predicate for a whole string, segment by segment.
pub fn is_allowed(symbols: &[u8], segments: &[Segment]) -> bool {
    let mut rest = symbols;
    for seg in segments {
        if rest.len() < seg.length as usize {
            return false;
        }
        let (head, tail) = rest.split_at(seg.length as usize);
        if !segment_allows(head, seg.placement) {
            return false;
        }
        rest = tail;
    }
    rest.is_empty()
}

fn space_size(spec: &PatternSpec, budget: u64) -> Result<u64> {
    let d = spec.alphabet_size() as u64;
    let len = spec.total_length();
    let size = d.checked_pow(len).filter(|&s| s <= budget).ok_or_else(|| {
        Error::Resource(format!(
            "enumerating {d}^{len} strings exceeds the budget of {budget}"
        ))
    })?;
    Ok(size)
}

/// Little-endian base-`d` digits of `value`.
fn decode(mut value: u64, d: u64, out: &mut [u8]) {
    for digit in out.iter_mut() {
        *digit = (value % d) as u8;
        value /= d;
    }
}

/// Advances a little-endian digit vector by one.
fn increment(digits: &mut [u8], d: u8) {
    for digit in digits.iter_mut() {
        *digit += 1;
        if *digit < d {
            return;
        }
        *digit = 0;
    }
}

fn count_range(spec: &PatternSpec, range: Range<u64>) -> u64 {
    let d = spec.alphabet_size() as u8;
    let mut digits = vec![0u8; spec.total_length() as usize];
    decode(range.start, d as u64, &mut digits);
    let mut hits = 0;
    for _ in range {
        if is_allowed(&digits, spec.segments()) {
            hits += 1;
        }
        increment(&mut digits, d);
    }
    hits
}

/// Exhaustive count of allowed strings with the default budget.
pub fn brute_force_count(spec: &PatternSpec) -> Result<AllowedCount> {
    brute_force_count_with(spec, DEFAULT_BUDGET, Execution::default())
}

pub fn brute_force_count_with(
    spec: &PatternSpec,
    budget: u64,
    exec: Execution,
) -> Result<AllowedCount> {
    let size = space_size(spec, budget)?;
    let hits = sum_chunks(0..size, CHUNK, exec, |r| count_range(spec, r));
    Ok(AllowedCount {
        count: BigInt::from(hits),
        total_outcomes: BigInt::from(size),
    })
}

/// Every allowed string, as symbol vectors in enumeration order.
pub fn allowed_strings(spec: &PatternSpec, budget: u64) -> Result<Vec<Vec<u8>>> {
    let size = space_size(spec, budget)?;
    let d = spec.alphabet_size() as u8;
    let mut digits = vec![0u8; spec.total_length() as usize];
    let mut out = Vec::new();
    for _ in 0..size {
        if is_allowed(&digits, spec.segments()) {
            out.push(digits.clone());
        }
        increment(&mut digits, d);
    }
    Ok(out)
}

/// Computational-basis indices of the allowed strings of a binary spec.
///
/// The first measured symbol is the most significant bit, so the string
/// `a_{n-1} ... a_0` maps to `sum a_k 2^k`.
pub fn allowed_basis_indices(spec: &PatternSpec, budget: u64) -> Result<Vec<usize>> {
    if spec.alphabet_size() != 2 {
        return Err(Error::domain("basis indices are defined for binary strings only"));
    }
    let mut out: Vec<usize> = allowed_strings(spec, budget)?
        .iter()
        .map(|s| s.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Probability of the allowed set for an i.i.d. coin that shows the
/// distinguished symbol with probability `p_one`.
///
/// Enumerates all `2^m` indicator strings (distinguished vs. anything else)
/// and sums `p^ones (1-p)^others` over the allowed ones.
pub fn weighted_oracle_probability(
    p_one: &ExactRational,
    m: u32,
    placement: Placement,
) -> Result<ExactRational> {
    let spec = PatternSpec::binary(m, placement)?;
    let size = space_size(&spec, DEFAULT_BUDGET)?;
    let q = BigRational::one() - p_one;
    let mut digits = vec![0u8; m as usize];
    let mut total = BigRational::zero();
    for _ in 0..size {
        if is_allowed(&digits, spec.segments()) {
            let ones = digits.iter().filter(|&&b| b == DISTINGUISHED).count();
            let weight = num_traits::pow(p_one.clone(), ones)
                * num_traits::pow(q.clone(), m as usize - ones);
            total += weight;
        }
        increment(&mut digits, 2);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(spec: &PatternSpec) -> u64 {
        let c = brute_force_count(spec).unwrap().count;
        c.try_into().unwrap()
    }

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn predicate_literal_cases() {
        assert!(segment_allows(&bits("0011"), Placement::AtEnd));
        assert!(segment_allows(&bits("1011"), Placement::AtEnd));
        assert!(!segment_allows(&bits("0111"), Placement::AtEnd));
        assert!(!segment_allows(&bits("1111"), Placement::AnywhereOnce));
        assert!(segment_allows(&bits("0110"), Placement::AtPosition(2)));
        assert!(!segment_allows(&bits("0110"), Placement::AtPosition(1)));
        assert!(segment_allows(&bits("1101"), Placement::AtStart));
        assert!(!segment_allows(&bits("0000"), Placement::AnywhereOnce));
    }

    #[test]
    fn boundary_straddle_is_permitted() {
        let segs = [Segment::new(3, Placement::AtStart), Segment::new(3, Placement::AtEnd)];
        // 110|111 fails (two pairs in segment 2); 111|011 fails; 101|011 fails segment 1
        assert!(is_allowed(&bits("110011"), &segs));
        assert!(!is_allowed(&bits("110111"), &segs));
        let segs = [Segment::new(3, Placement::AtEnd), Segment::new(3, Placement::AtStart)];
        // the "11" across the boundary 01[1|1]10 is not checked
        assert!(is_allowed(&bits("011110"), &segs));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(count(&PatternSpec::binary(5, Placement::AtEnd).unwrap()), 3);
        assert_eq!(count(&PatternSpec::binary(2, Placement::AtEnd).unwrap()), 1);
        assert_eq!(count(&PatternSpec::binary(4, Placement::AnywhereOnce).unwrap()), 5);
        assert_eq!(count(&PatternSpec::single(4, 3, Placement::AtEnd).unwrap()), 3);
        assert_eq!(count(&PatternSpec::single(3, 4, Placement::AtEnd).unwrap()), 6);
    }

    #[test]
    fn allowed_sets_match_hand_lists() {
        let show = |spec: PatternSpec| -> Vec<String> {
            let mut v: Vec<String> = allowed_strings(&spec, DEFAULT_BUDGET)
                .unwrap()
                .iter()
                .map(|s| s.iter().map(|b| char::from(b'0' + b)).collect())
                .collect();
            v.sort();
            v
        };
        assert_eq!(show(PatternSpec::binary(4, Placement::AtEnd).unwrap()), ["0011", "1011"]);
        assert_eq!(
            show(PatternSpec::binary(5, Placement::AtEnd).unwrap()),
            ["00011", "01011", "10011"]
        );
        assert_eq!(show(PatternSpec::binary(4, Placement::AtPosition(2)).unwrap()), ["0110"]);
        assert_eq!(
            show(PatternSpec::binary(4, Placement::AnywhereOnce).unwrap()),
            ["0011", "0110", "1011", "1100", "1101"]
        );
    }

    #[test]
    fn basis_indices_high_bit_first() {
        let spec = PatternSpec::binary(4, Placement::AtEnd).unwrap();
        assert_eq!(allowed_basis_indices(&spec, DEFAULT_BUDGET).unwrap(), [0b0011, 0b1011]);
    }

    #[test]
    fn budget_is_enforced() {
        let spec = PatternSpec::binary(27, Placement::AtEnd).unwrap();
        assert!(matches!(brute_force_count(&spec), Err(Error::Resource(_))));
        let spec = PatternSpec::binary(10, Placement::AtEnd).unwrap();
        assert!(matches!(
            brute_force_count_with(&spec, 1000, Execution::Serial),
            Err(Error::Resource(_))
        ));
        let spec = PatternSpec::single(200, 200, Placement::AtEnd).unwrap();
        assert!(matches!(brute_force_count(&spec), Err(Error::Resource(_))));
    }

    #[test]
    fn serial_equals_parallel() {
        let spec = PatternSpec::binary(18, Placement::AnywhereOnce).unwrap();
        let a = brute_force_count_with(&spec, DEFAULT_BUDGET, Execution::Serial).unwrap();
        let b = brute_force_count_with(&spec, DEFAULT_BUDGET, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn weighted_oracle_small() {
        let third = BigRational::new(1.into(), 3.into());
        let p = weighted_oracle_probability(&third, 4, Placement::AtEnd).unwrap();
        assert_eq!(p, BigRational::new(2.into(), 27.into()));
        let half = BigRational::new(1.into(), 2.into());
        let p = weighted_oracle_probability(&half, 6, Placement::AtEnd).unwrap();
        assert_eq!(p, BigRational::new(5.into(), 64.into()));
    }
}
