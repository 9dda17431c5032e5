//! Closed-form counts of allowed outcome strings.
//!
//! An outcome string is a sequence of measurement results over an alphabet
//! `0..d`. Symbol `1` is distinguished; a string is *allowed* for a segment
//! when the pair `11` occurs in that segment exactly once, at the place named
//! by its [`Placement`]. Overlapping pairs count separately, so `111` holds
//! two occurrences and is never allowed.
//!
//! A partitioned spec concatenates independent segments. Constraints do not
//! couple across a segment boundary, so a `11` straddling two segments is
//! permitted and the count is the product of per-segment counts.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::sequences::{fibonacci, lucas, qudit_fibonacci_table};
use crate::{Error, ExactInteger, Result};

/// Where the single `11` must sit inside a segment. Positions are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Placement {
    /// Occupies the last two symbols.
    AtEnd,
    /// Occupies the first two symbols.
    AtStart,
    /// Occupies positions `k` and `k + 1`.
    AtPosition(u32),
    /// Occurs exactly once, anywhere.
    AnywhereOnce,
}

impl Placement {
    /// The 1-based start of the pair within a segment of `length`, if fixed.
    pub fn start_in(&self, length: u32) -> Option<u32> {
        match *self {
            Placement::AtEnd => Some(length - 1),
            Placement::AtStart => Some(1),
            Placement::AtPosition(k) => Some(k),
            Placement::AnywhereOnce => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Placement::AtEnd => "end",
            Placement::AtStart => "start",
            Placement::AtPosition(_) => "position",
            Placement::AnywhereOnce => "anywhere-once",
        }
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Placement::AtPosition(k) => write!(f, "position:{k}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Placement {
    type Err = Error;

    /// Accepts `end`, `start`, `anywhere-once` and `position:K`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "end" => Ok(Placement::AtEnd),
            "start" => Ok(Placement::AtStart),
            "anywhere-once" | "anywhere" => Ok(Placement::AnywhereOnce),
            _ => match s.strip_prefix("position:") {
                Some(k) => k
                    .parse()
                    .map(Placement::AtPosition)
                    .map_err(|_| Error::validation(format!("bad position in '{s}'"))),
                None => Err(Error::validation(format!("unknown placement '{s}'"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub length: u32,
    pub placement: Placement,
}

impl Segment {
    pub fn new(length: u32, placement: Placement) -> Self {
        Segment { length, placement }
    }

    fn validate(&self) -> Result<()> {
        if self.length < 2 {
            return Err(Error::domain(format!(
                "segment length must be >= 2, got {}",
                self.length
            )));
        }
        if let Placement::AtPosition(k) = self.placement {
            if k < 1 || k > self.length - 1 {
                return Err(Error::domain(format!(
                    "position k = {k} outside 1..={} for length {}",
                    self.length - 1,
                    self.length
                )));
            }
        }
        Ok(())
    }
}

/// Describes the allowed set of outcome strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSpec {
    alphabet_size: u32,
    segments: Vec<Segment>,
}

impl PatternSpec {
    pub fn new(alphabet_size: u32, segments: Vec<Segment>) -> Result<Self> {
        if alphabet_size < 2 {
            return Err(Error::domain(format!(
                "alphabet size must be >= 2, got {alphabet_size}"
            )));
        }
        if segments.is_empty() {
            return Err(Error::domain("at least one segment is required"));
        }
        for s in &segments {
            s.validate()?;
        }
        Ok(PatternSpec { alphabet_size, segments })
    }

    /// A single binary segment.
    pub fn binary(length: u32, placement: Placement) -> Result<Self> {
        PatternSpec::new(2, vec![Segment::new(length, placement)])
    }

    /// A single segment over a `d`-symbol alphabet.
    pub fn single(alphabet_size: u32, length: u32, placement: Placement) -> Result<Self> {
        PatternSpec::new(alphabet_size, vec![Segment::new(length, placement)])
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_length(&self) -> u32 {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn is_partitioned(&self) -> bool {
        self.segments.len() > 1
    }

    /// `d^total_length`.
    pub fn total_outcomes(&self) -> ExactInteger {
        Pow::pow(BigInt::from(self.alphabet_size), self.total_length())
    }
}

/// A count of allowed strings together with the size of the outcome space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllowedCount {
    pub count: ExactInteger,
    pub total_outcomes: ExactInteger,
}

impl AllowedCount {
    fn new(count: ExactInteger, spec: &PatternSpec) -> Self {
        AllowedCount { count, total_outcomes: spec.total_outcomes() }
    }
}

/// `D_k D_{n-k}` for a pair at `k` inside a length-`n` segment. With `d = 2`
/// this is `F_k F_{n-k}`.
fn segment_position_count(d: u32, n: u32, k: u32) -> Result<ExactInteger> {
    if d == 2 {
        return Ok(fibonacci(k as i64)? * fibonacci((n - k) as i64)?);
    }
    let table = qudit_fibonacci_table(d as u64, n)?;
    Ok(&table[k as usize] * &table[(n - k) as usize])
}

fn segment_count(d: u32, seg: &Segment) -> Result<ExactInteger> {
    let n = seg.length;
    match seg.placement.start_in(n) {
        Some(k) => segment_position_count(d, n, k),
        None if d == 2 => anywhere_once_closed_form(n),
        None => {
            let table = qudit_fibonacci_table(d as u64, n)?;
            Ok((1..n as usize).map(|k| &table[k] * &table[n as usize - k]).sum())
        }
    }
}

/// `(n L_n - F_n) / 5`; the division is checked to be exact.
fn anywhere_once_closed_form(n: u32) -> Result<ExactInteger> {
    let n = n as i64;
    let numer = lucas(n)? * n - fibonacci(n)?;
    let five = BigInt::from(5);
    let (q, r) = num_integer::Integer::div_rem(&numer, &five);
    if !r.is_zero() {
        return Err(Error::Identity(format!("(n L_n - F_n) not divisible by 5 at n = {n}")));
    }
    Ok(q)
}

fn binary_length(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("length must be >= 2, got {n}")));
    }
    Ok(())
}

/// Binary strings of length `n` whose only `11` is the final pair: `F_{n-1}`.
pub fn count_end_duplicated(n: u32) -> Result<AllowedCount> {
    binary_length(n)?;
    let spec = PatternSpec::binary(n, Placement::AtEnd)?;
    Ok(AllowedCount::new(fibonacci(n as i64 - 1)?, &spec))
}

/// Binary strings of length `n` whose only `11` sits at `(k, k+1)`: `F_k F_{n-k}`.
pub fn count_position_duplicated(n: u32, k: u32) -> Result<AllowedCount> {
    binary_length(n)?;
    let spec = PatternSpec::binary(n, Placement::AtPosition(k))?;
    Ok(AllowedCount::new(segment_position_count(2, n, k)?, &spec))
}

/// Binary strings of length `n` with exactly one `11`: `(n L_n - F_n) / 5`.
pub fn count_anywhere_once(n: u32) -> Result<AllowedCount> {
    binary_length(n)?;
    let spec = PatternSpec::binary(n, Placement::AnywhereOnce)?;
    Ok(AllowedCount::new(anywhere_once_closed_form(n)?, &spec))
}

/// Strings of length `m` over `d` symbols whose only `11` is final: `D_{m-1}`.
pub fn count_qudit_end(d: u32, m: u32) -> Result<AllowedCount> {
    if m < 2 {
        return Err(Error::domain(format!("length must be >= 2, got {m}")));
    }
    let spec = PatternSpec::single(d, m, Placement::AtEnd)?;
    let table = qudit_fibonacci_table(d as u64, m - 1)?;
    Ok(AllowedCount::new(table[m as usize - 1].clone(), &spec))
}

/// Product of per-segment counts. Works for unpartitioned specs too.
pub fn count_partitioned(spec: &PatternSpec) -> Result<AllowedCount> {
    let mut count = BigInt::one();
    for seg in spec.segments() {
        count *= segment_count(spec.alphabet_size(), seg)?;
    }
    Ok(AllowedCount::new(count, spec))
}

/// Closed-form count for any spec.
pub fn count(spec: &PatternSpec) -> Result<AllowedCount> {
    count_partitioned(spec)
}

/// Flat key-value form of a [`PatternSpec`] used on the command line and in
/// JSON.
///
/// `partition` lists segment lengths (empty means one segment of `length`).
/// `positions`, when non-empty, gives one `k` per segment and overrides
/// `placement`. `k` applies to the `position` placement of an unpartitioned
/// spec.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternRecord {
    pub alphabet_size: u32,
    pub length: u32,
    pub placement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default)]
    pub partition: Vec<u32>,
    #[serde(default)]
    pub positions: Vec<u32>,
}

impl TryFrom<&PatternRecord> for PatternSpec {
    type Error = Error;

    fn try_from(r: &PatternRecord) -> Result<Self> {
        let base = match (r.placement.as_str(), r.k) {
            ("position", Some(k)) => Placement::AtPosition(k),
            ("position", None) => {
                if r.positions.is_empty() {
                    return Err(Error::validation("placement 'position' needs k"));
                }
                Placement::AtEnd
            }
            (p, _) => p.parse()?,
        };
        let lengths = if r.partition.is_empty() { vec![r.length] } else { r.partition.clone() };
        let total: u32 = lengths.iter().sum();
        if total != r.length {
            return Err(Error::domain(format!(
                "partition {:?} sums to {total}, not length {}",
                lengths, r.length
            )));
        }
        if !r.positions.is_empty() && r.positions.len() != lengths.len() {
            return Err(Error::domain(format!(
                "{} positions given for {} segments",
                r.positions.len(),
                lengths.len()
            )));
        }
        let segments = lengths
            .iter()
            .enumerate()
            .map(|(i, &len)| {
                let placement = r.positions.get(i).map_or(base, |&k| Placement::AtPosition(k));
                Segment::new(len, placement)
            })
            .collect();
        PatternSpec::new(r.alphabet_size, segments)
    }
}

impl From<&PatternSpec> for PatternRecord {
    fn from(spec: &PatternSpec) -> Self {
        let segs = spec.segments();
        let uniform = segs.iter().all(|s| s.placement == segs[0].placement);
        let (placement, k, positions) = match (segs.len(), segs[0].placement) {
            (1, Placement::AtPosition(k)) => ("position".to_string(), Some(k), vec![]),
            (_, p) if uniform && !matches!(p, Placement::AtPosition(_)) => {
                (p.name().to_string(), None, vec![])
            }
            _ => {
                let positions = segs
                    .iter()
                    .map(|s| s.placement.start_in(s.length).unwrap_or(0))
                    .collect();
                ("position".to_string(), None, positions)
            }
        };
        PatternRecord {
            alphabet_size: spec.alphabet_size(),
            length: spec.total_length(),
            placement,
            k,
            partition: if segs.len() > 1 { segs.iter().map(|s| s.length).collect() } else { vec![] },
            positions,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: u64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn end_examples() {
        assert_eq!(count_end_duplicated(2).unwrap().count, c(1));
        assert_eq!(count_end_duplicated(3).unwrap().count, c(1));
        assert_eq!(count_end_duplicated(4).unwrap().count, c(2));
        assert_eq!(count_end_duplicated(5).unwrap().count, c(3));
        assert_eq!(count_end_duplicated(5).unwrap().total_outcomes, c(32));
        assert!(matches!(count_end_duplicated(1), Err(Error::Domain(_))));
    }

    #[test]
    fn end_satisfies_tree_recursion() {
        for n in 4..200 {
            let a = |m| count_end_duplicated(m).unwrap().count;
            assert_eq!(a(n), a(n - 1) + a(n - 2));
        }
    }

    #[test]
    fn position_examples() {
        assert_eq!(count_position_duplicated(4, 2).unwrap().count, c(1));
        assert_eq!(count_position_duplicated(4, 3).unwrap().count, count_end_duplicated(4).unwrap().count);
        assert_eq!(count_position_duplicated(6, 3).unwrap().count, c(4));
        assert_eq!(count_position_duplicated(6, 1).unwrap().count, count_end_duplicated(6).unwrap().count);
        assert!(count_position_duplicated(4, 0).is_err());
        assert!(count_position_duplicated(4, 4).is_err());
    }

    #[test]
    fn anywhere_examples() {
        assert_eq!(count_anywhere_once(4).unwrap().count, c(5));
        assert_eq!(count_anywhere_once(2).unwrap().count, c(1));
        assert_eq!(count_anywhere_once(5).unwrap().count, c(10));
    }

    #[test]
    fn anywhere_is_sum_over_positions() {
        for n in 2..=60 {
            let sum: BigInt = (1..n).map(|k| count_position_duplicated(n, k).unwrap().count).sum();
            assert_eq!(sum, count_anywhere_once(n).unwrap().count, "n = {n}");
        }
    }

    #[test]
    fn qudit_examples() {
        assert_eq!(count_qudit_end(2, 6).unwrap().count, c(5));
        assert_eq!(count_qudit_end(4, 3).unwrap().count, c(3));
        assert_eq!(count_qudit_end(3, 4).unwrap().count, c(6));
        assert_eq!(count_qudit_end(4, 3).unwrap().total_outcomes, c(64));
        assert!(count_qudit_end(1, 4).is_err());
        assert!(count_qudit_end(3, 1).is_err());
    }

    #[test]
    fn partitioned_examples() {
        let spec = PatternSpec::new(2, vec![Segment::new(4, Placement::AtEnd); 2]).unwrap();
        assert_eq!(count_partitioned(&spec).unwrap().count, c(4));
        let spec = PatternSpec::new(
            2,
            vec![Segment::new(4, Placement::AtPosition(2)), Segment::new(6, Placement::AtPosition(3))],
        )
        .unwrap();
        let got = count_partitioned(&spec).unwrap();
        assert_eq!(got.count, c(4));
        assert_eq!(got.total_outcomes, c(1024));
    }

    #[test]
    fn bipartite_lucas_form() {
        for n in 2..=30i64 {
            for m in 2..=30i64 {
                let spec = PatternSpec::new(
                    2,
                    vec![Segment::new(n as u32, Placement::AtEnd), Segment::new(m as u32, Placement::AtEnd)],
                )
                .unwrap();
                let sign = if m % 2 == 0 { 1 } else { -1 };
                let lucas_form = lucas(n + m - 2).unwrap() + lucas(n - m).unwrap() * sign;
                assert_eq!(count_partitioned(&spec).unwrap().count * 5, lucas_form);
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(PatternSpec::new(1, vec![Segment::new(4, Placement::AtEnd)]).is_err());
        assert!(PatternSpec::new(2, vec![]).is_err());
        assert!(PatternSpec::new(2, vec![Segment::new(1, Placement::AtEnd)]).is_err());
        assert!(PatternSpec::new(2, vec![Segment::new(5, Placement::AtPosition(5))]).is_err());
    }

    #[test]
    fn placement_parsing() {
        assert_eq!("end".parse::<Placement>().unwrap(), Placement::AtEnd);
        assert_eq!("position:3".parse::<Placement>().unwrap(), Placement::AtPosition(3));
        assert_eq!(Placement::AtPosition(3).to_string(), "position:3");
        assert!("middle".parse::<Placement>().is_err());
    }

    #[test]
    fn record_conversion() {
        let r = PatternRecord {
            alphabet_size: 2,
            length: 10,
            placement: "position".into(),
            k: None,
            partition: vec![4, 6],
            positions: vec![2, 3],
        };
        let spec = PatternSpec::try_from(&r).unwrap();
        assert_eq!(spec.segments()[1], Segment::new(6, Placement::AtPosition(3)));
        assert_eq!(PatternRecord::from(&spec), r);

        let bad = PatternRecord { length: 11, ..r.clone() };
        assert!(PatternSpec::try_from(&bad).is_err());

        let single = PatternRecord {
            alphabet_size: 2,
            length: 6,
            placement: "position".into(),
            k: Some(3),
            partition: vec![],
            positions: vec![],
        };
        let spec = PatternSpec::try_from(&single).unwrap();
        assert_eq!(spec.segments(), &[Segment::new(6, Placement::AtPosition(3))]);
        assert_eq!(PatternRecord::from(&spec), single);
    }
}
