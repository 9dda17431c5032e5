//! Exact identity suites.
//!
//! Each suite evaluates an identity over a range of indices by two
//! independent routes and records one [`Check`] per instance. Rational and
//! integer comparisons are exact; only the golden-ratio suite uses a
//! tolerance.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::highprec::HighPrecision;
use crate::oracle;
use crate::pattern::Placement;
use crate::probability::{self, CoinModel};
use crate::sequences::{self, fibonacci, lucas, GoldenRatioPair, RatioKind};
use crate::{Error, ExactRational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    LucasProduct,
    AnywhereOnce,
    EndRecursion,
    QuditRecursion,
    GenericRecursion,
    GoldenRatio,
    Cassini,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::LucasProduct,
        Suite::AnywhereOnce,
        Suite::EndRecursion,
        Suite::QuditRecursion,
        Suite::GenericRecursion,
        Suite::GoldenRatio,
        Suite::Cassini,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::LucasProduct => "lucas-product",
            Suite::AnywhereOnce => "anywhere-once",
            Suite::EndRecursion => "end-recursion",
            Suite::QuditRecursion => "qudit-recursion",
            Suite::GenericRecursion => "generic-recursion",
            Suite::GoldenRatio => "golden-ratio",
            Suite::Cassini => "cassini",
        }
    }

    /// The index range used when the caller does not give one.
    pub fn default_max(&self) -> u32 {
        match self {
            Suite::LucasProduct | Suite::AnywhereOnce => 50,
            Suite::EndRecursion => 200,
            Suite::QuditRecursion => 100,
            Suite::GenericRecursion => 16,
            Suite::GoldenRatio => 100,
            Suite::Cassini => 500,
        }
    }

    pub fn run(&self, max: u32) -> Result<SuiteReport> {
        let checks = match self {
            Suite::LucasProduct => lucas_product(max)?,
            Suite::AnywhereOnce => anywhere_once(max)?,
            Suite::EndRecursion => end_recursion(max)?,
            Suite::QuditRecursion => qudit_recursion(&[2, 3, 4, 8, 16], max)?,
            Suite::GenericRecursion => {
                generic_recursion(&[(1, 3), (1, 2), (3, 7), (0, 1), (1, 1)], max)?
            }
            Suite::GoldenRatio => golden_ratio(max)?,
            Suite::Cassini => cassini(max)?,
        };
        Ok(SuiteReport { suite: *self, max, checks })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::validation(format!("unknown identity suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub pass: bool,
}

impl Check {
    fn new(label: impl Into<String>, pass: bool) -> Self {
        Check { label: label.into(), pass }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub max: u32,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.failures() == 0
    }
}

fn sign(exp: i64) -> i64 {
    if exp.rem_euclid(2) == 0 { 1 } else { -1 }
}

/// `5 F_m F_n = L_{m+n} - (-1)^n L_{m-n}` for `1 <= m, n <= max`.
pub fn lucas_product(max: u32) -> Result<Vec<Check>> {
    let max = max as i64;
    let mut out = Vec::with_capacity((max * max) as usize);
    for m in 1..=max {
        for n in 1..=max {
            let lhs = fibonacci(m)? * fibonacci(n)? * 5;
            let rhs = lucas(m + n)? - lucas(m - n)? * sign(n);
            out.push(Check::new(format!("m={m} n={n}"), lhs == rhs));
        }
    }
    Ok(out)
}

/// `sum_k F_k F_{n-k} = (n L_n - F_n) / 5` with exact division, `2 <= n <= max`.
pub fn anywhere_once(max: u32) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 2..=max as i64 {
        let sum: BigInt = (1..n).map(|k| Ok(fibonacci(k)? * fibonacci(n - k)?)).sum::<Result<_>>()?;
        let numer = lucas(n)? * n - fibonacci(n)?;
        let exact = (&numer % 5u8).is_zero();
        out.push(Check::new(format!("n={n}"), exact && sum * 5 == numer));
    }
    Ok(out)
}

/// `P_n = P_{n-1}/2 + P_{n-2}/4` for `3 <= n <= max`.
pub fn end_recursion(max: u32) -> Result<Vec<Check>> {
    Ok(probability::prob_end_recursion_check(max)?
        .into_iter()
        .map(|r| Check::new(format!("n={}", r.n), r.pass))
        .collect())
}

/// `D_{M-1} / d^M` against `P_{M+1} = (1 - 1/d)(P_M + P_{M-1}/d)` step by
/// step, for `2 <= M <= max`.
pub fn qudit_recursion(alphabets: &[u32], max: u32) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &d in alphabets {
        let inv = BigRational::new(BigInt::one(), BigInt::from(d));
        let q = BigRational::one() - &inv;
        let closed: Vec<ExactRational> = (2..=max.max(3))
            .map(|m| {
                let c = crate::pattern::count_qudit_end(d, m)?;
                Ok(BigRational::new(c.count, c.total_outcomes))
            })
            .collect::<Result<_>>()?;
        let p2 = &inv * &inv;
        out.push(Check::new(format!("d={d} M=2"), closed[0] == p2));
        out.push(Check::new(format!("d={d} M=3"), closed[1] == &p2 - &p2 * &inv));
        for m in 3..max {
            let i = (m - 2) as usize;
            let next = &q * (&closed[i] + &inv * &closed[i - 1]);
            out.push(Check::new(format!("d={d} M={}", m + 1), next == closed[i + 1]));
        }
    }
    Ok(out)
}

/// Biased-coin recursion against the weighted enumeration oracle, for
/// `2 <= M <= max` and each `p = num/den`.
pub fn generic_recursion(ps: &[(i64, i64)], max: u32) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &(num, den) in ps {
        let p = BigRational::new(BigInt::from(num), BigInt::from(den));
        let model = CoinModel::biased(2, p.clone())?;
        for m in 2..=max {
            let by_recursion = probability::prob_generic_coin(&model, m)?;
            let by_oracle = oracle::weighted_oracle_probability(&p, m, Placement::AtEnd)?;
            out.push(Check::new(format!("p={num}/{den} M={m}"), by_recursion == by_oracle));
        }
    }
    Ok(out)
}

/// Consecutive-ratio limits at `n`: within `1e-12` of `phi` and `phi/2`.
pub fn golden_ratio(n: u32) -> Result<Vec<Check>> {
    let digits = 40;
    let phi = GoldenRatioPair::new(digits).phi;
    let half_phi = phi.div(&HighPrecision::from_integer(&BigInt::from(2), digits));
    let n = n.max(3) as i64;
    let count = sequences::render_ratio(&sequences::ratio_limit(RatioKind::Count, n + 1)?, digits);
    let prob =
        sequences::render_ratio(&sequences::ratio_limit(RatioKind::Probability, n + 1)?, digits);
    Ok(vec![
        Check::new(format!("F_{}/F_{n} ~ phi", n + 1), count.is_within(&phi, 12)),
        Check::new(format!("P_{}/P_{n} ~ phi/2", n + 1), prob.is_within(&half_phi, 12)),
    ])
}

/// `F_{n-1} F_{n+1} - F_n^2 = (-1)^n` and `L_n = F_{n-1} + F_{n+1}`.
pub fn cassini(max: u32) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 1..=max as i64 {
        let lhs = fibonacci(n - 1)? * fibonacci(n + 1)? - fibonacci(n)? * fibonacci(n)?;
        out.push(Check::new(format!("cassini n={n}"), lhs == BigInt::from(sign(n))));
    }
    for n in 0..=max as i64 {
        let l = fibonacci(n - 1)? + fibonacci(n + 1)?;
        out.push(Check::new(format!("lucas n={n}"), l == lucas(n)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_defaults() {
        for suite in Suite::ALL {
            let report = suite.run(suite.default_max()).unwrap();
            assert!(!report.checks.is_empty(), "{suite}");
            assert!(report.all_pass(), "{suite}: {:?}", report.checks.iter().find(|c| !c.pass));
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn sizes() {
        assert_eq!(lucas_product(50).unwrap().len(), 2500);
        assert_eq!(anywhere_once(50).unwrap().len(), 49);
        assert_eq!(end_recursion(200).unwrap().len(), 198);
    }
}
