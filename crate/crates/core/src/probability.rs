//! Exact probabilities of the allowed sets, their closed forms, and the
//! recursions they satisfy.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::pattern::{self, PatternSpec, Placement};
use crate::sequences::{fibonacci, lucas};
use crate::{Error, ExactRational, Result};

fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow2(n: u32) -> BigInt {
    Pow::pow(BigInt::from(2u8), n)
}

/// A coin with `outcome_count` faces in which the distinguished face `1`
/// comes up with probability `p_one`.
///
/// The optional `bias_profile` is the full face distribution; it is only
/// used when simulating and must agree with `p_one`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinModel {
    outcome_count: u32,
    p_one: ExactRational,
    bias_profile: Option<Vec<ExactRational>>,
}

impl CoinModel {
    /// A fair `d`-sided coin.
    pub fn fair(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::validation(format!("outcome count must be >= 2, got {d}")));
        }
        Ok(CoinModel { outcome_count: d, p_one: rat(1, d as i64), bias_profile: None })
    }

    /// A `d`-sided coin whose distinguished face has probability `p_one`;
    /// the remaining mass is spread evenly over the other faces.
    pub fn biased(d: u32, p_one: ExactRational) -> Result<Self> {
        if d < 2 {
            return Err(Error::validation(format!("outcome count must be >= 2, got {d}")));
        }
        if p_one.is_negative() || p_one > BigRational::one() {
            return Err(Error::validation(format!("p_one = {p_one} outside [0, 1]")));
        }
        Ok(CoinModel { outcome_count: d, p_one, bias_profile: None })
    }

    /// A coin given by its full face distribution; entry 1 is `p_one`.
    pub fn with_profile(profile: Vec<ExactRational>) -> Result<Self> {
        if profile.len() < 2 {
            return Err(Error::validation("a profile needs at least two faces"));
        }
        if profile.iter().any(|p| p.is_negative()) {
            return Err(Error::validation("profile entries must be non-negative"));
        }
        let total: ExactRational = profile.iter().sum();
        if !total.is_one() {
            return Err(Error::validation(format!("profile sums to {total}, not 1")));
        }
        Ok(CoinModel {
            outcome_count: profile.len() as u32,
            p_one: profile[1].clone(),
            bias_profile: Some(profile),
        })
    }

    pub fn outcome_count(&self) -> u32 {
        self.outcome_count
    }

    pub fn p_one(&self) -> &ExactRational {
        &self.p_one
    }

    pub fn bias_profile(&self) -> Option<&[ExactRational]> {
        self.bias_profile.as_deref()
    }
}

fn check_length(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("length must be >= 2, got {n}")));
    }
    Ok(())
}

/// `P_n = F_{n-1} / 2^n`: the only `11` in `n` fair binary trials is final.
pub fn prob_end(n: u32) -> Result<ExactRational> {
    check_length(n)?;
    Ok(BigRational::new(fibonacci(n as i64 - 1)?, pow2(n)))
}

/// Outcome of checking `P_n = P_{n-1}/2 + P_{n-2}/4` at one `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionCheck {
    pub n: u32,
    pub value: ExactRational,
    pub pass: bool,
}

/// Checks the end-pair recursion exactly for `3 <= n <= n_max`, seeded with
/// `P_1 = 0` and `P_2 = 1/4`.
pub fn prob_end_recursion_check(n_max: u32) -> Result<Vec<RecursionCheck>> {
    if n_max < 3 {
        return Err(Error::domain(format!("n_max must be >= 3, got {n_max}")));
    }
    let half = rat(1, 2);
    let quarter = rat(1, 4);
    let (mut prev2, mut prev1) = (BigRational::zero(), quarter.clone());
    let mut out = Vec::with_capacity(n_max as usize - 2);
    for n in 3..=n_max {
        let value = &half * &prev1 + &quarter * &prev2;
        let pass = value == prob_end(n)?;
        out.push(RecursionCheck { n, value: value.clone(), pass });
        prev2 = std::mem::replace(&mut prev1, value);
    }
    Ok(out)
}

/// `P_{n,k} = F_k F_{n-k} / 2^n`, cross-checked against
/// `(L_n - (-1)^k L_{n-2k}) / (5 * 2^n)`.
pub fn prob_position(n: u32, k: u32) -> Result<ExactRational> {
    check_length(n)?;
    let count = pattern::count_position_duplicated(n, k)?.count;
    let p = BigRational::new(count, pow2(n));
    let (n, k) = (n as i64, k as i64);
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let lucas_form = BigRational::new(lucas(n)? - lucas(n - 2 * k)? * sign, pow2(n as u32) * 5);
    if lucas_form != p {
        return Err(Error::Identity(format!("Lucas form of P_{{{n},{k}}} disagrees")));
    }
    Ok(p)
}

/// Probability that `11` appears exactly once in `n` fair binary trials.
///
/// Equal to both `sum_k P_{n,k}` and `(n L_n - F_n) / (5 * 2^n)`.
pub fn prob_anywhere_once(n: u32) -> Result<ExactRational> {
    check_length(n)?;
    let count = pattern::count_anywhere_once(n)?.count;
    Ok(BigRational::new(count, pow2(n)))
}

/// `count / d^L` for any spec.
pub fn prob_partitioned(spec: &PatternSpec) -> Result<ExactRational> {
    let c = pattern::count_partitioned(spec)?;
    Ok(BigRational::new(c.count, c.total_outcomes))
}

/// `P_M = D_{M-1} / d^M`, checked against the recursion
/// `P_{M+1} = (1 - 1/d)(P_M + P_{M-1}/d)` from `P_2 = d^-2`, `P_3 = d^-2 - d^-3`.
pub fn prob_qudit_end(d: u32, m: u32) -> Result<ExactRational> {
    let c = pattern::count_qudit_end(d, m)?;
    let p = BigRational::new(c.count, c.total_outcomes);
    let inv = rat(1, d as i64);
    let q = BigRational::one() - &inv;
    let p2 = &inv * &inv;
    let p3 = &p2 - &p2 * &inv;
    let by_recursion = run_recursion(&q, &(&q * &inv), p2, p3, m);
    if by_recursion != p {
        return Err(Error::Identity(format!("qudit recursion disagrees at d = {d}, M = {m}")));
    }
    Ok(p)
}

/// Iterates `P_M = a P_{M-1} + b P_{M-2}` from `(P_2, P_3)` up to `P_m`.
fn run_recursion(
    a: &ExactRational,
    b: &ExactRational,
    p2: ExactRational,
    p3: ExactRational,
    m: u32,
) -> ExactRational {
    if m == 2 {
        return p2;
    }
    let (mut prev, mut cur) = (p2, p3);
    for _ in 4..=m {
        let next = a * &cur + b * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Probability that the only `11` in `M` trials of `model` is final:
/// `P_M = (1 - p)(P_{M-1} + p P_{M-2})` with `P_2 = p^2`, `P_3 = p^2 (1 - p)`.
pub fn prob_generic_coin(model: &CoinModel, m: u32) -> Result<ExactRational> {
    check_length(m)?;
    let p = model.p_one();
    let q = BigRational::one() - p;
    let p2 = p * p;
    let p3 = &p2 * &q;
    Ok(run_recursion(&q, &(&q * p), p2, p3, m))
}

/// Exact probability of `event` in `M` trials of `model`.
///
/// A pair at `(k, k+1)` splits the string into a left block that ends in the
/// pair and a right block that starts with it; both are end-pair events, and
/// the shared pair is divided out once.
pub fn prob_event(model: &CoinModel, m: u32, event: Placement) -> Result<ExactRational> {
    PatternSpec::single(model.outcome_count(), m, event)?;
    let at = |k: u32| -> Result<ExactRational> {
        let p = model.p_one();
        if p.is_zero() {
            return Ok(BigRational::zero());
        }
        let left = prob_generic_coin(model, k + 1)?;
        let right = prob_generic_coin(model, m - k + 1)?;
        Ok(left * right / (p * p))
    };
    match event.start_in(m) {
        Some(k) => at(k),
        None => (1..m).map(at).sum(),
    }
}
