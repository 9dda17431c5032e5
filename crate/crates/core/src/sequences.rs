//! Fibonacci, Lucas and alphabet-generalized Fibonacci numbers.
//!
//! Single values are computed by fast doubling; [`fibonacci_table`] gives a
//! linear prefix for callers that need many consecutive values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::highprec::HighPrecision;
use crate::{Error, ExactInteger, ExactRational, Result};

/// Largest `|n|` accepted by the integer sequence kernels.
pub const MAX_INDEX: i64 = 1_000_000;

/// Default working precision (decimal digits) for real-valued results.
pub const DEFAULT_PRECISION: u32 = 50;

const LOG10_PHI: f64 = 0.208_987_640_249_978_73;

fn check_index(n: i64) -> Result<()> {
    if n.unsigned_abs() > MAX_INDEX as u64 {
        Err(Error::Range { index: n, limit: MAX_INDEX })
    } else {
        Ok(())
    }
}

/// `(F_n, F_{n+1})` for `n >= 0`.
fn fib_pair(n: u64) -> (BigInt, BigInt) {
    if n == 0 {
        return (BigInt::zero(), BigInt::one());
    }
    let (a, b) = fib_pair(n >> 1);
    // F_2k = F_k (2 F_{k+1} - F_k), F_2k+1 = F_k^2 + F_{k+1}^2
    let c = &a * (&b * 2u8 - &a);
    let d = &a * &a + &b * &b;
    if n & 1 == 0 {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

fn odd(n: u64) -> bool {
    n & 1 == 1
}

/// Fibonacci number `F_n` with `F_0 = 0`, `F_1 = 1` and `F_{-n} = (-1)^{n+1} F_n`.
pub fn fibonacci(n: i64) -> Result<ExactInteger> {
    check_index(n)?;
    let m = n.unsigned_abs();
    let f = fib_pair(m).0;
    Ok(if n < 0 && !odd(m) { -f } else { f })
}

/// Lucas number `L_n` with `L_0 = 2`, `L_1 = 1` and `L_{-n} = (-1)^n L_n`.
pub fn lucas(n: i64) -> Result<ExactInteger> {
    check_index(n)?;
    let m = n.unsigned_abs();
    let (f, f1) = fib_pair(m);
    let l = f1 * 2u8 - f;
    Ok(if n < 0 && odd(m) { -l } else { l })
}

/// `[F_0, F_1, ..., F_n]` by direct iteration.
pub fn fibonacci_table(n: u32) -> Result<Vec<ExactInteger>> {
    check_index(n as i64)?;
    let mut out = Vec::with_capacity(n as usize + 1);
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..=n {
        let next = &a + &b;
        out.push(std::mem::replace(&mut a, std::mem::replace(&mut b, next)));
    }
    Ok(out)
}

/// Generalized Fibonacci number over a `d`-symbol alphabet:
/// `D_0 = 0`, `D_1 = 1`, `D_M = (d - 1)(D_{M-1} + D_{M-2})`.
///
/// `d = 2` gives the Fibonacci numbers. `d` need not be a power of two.
pub fn qudit_fibonacci(d: u64, m: u32) -> Result<ExactInteger> {
    Ok(qudit_fibonacci_table(d, m)?.pop().expect("table is never empty"))
}

/// `[D_0, ..., D_M]` for alphabet size `d`.
pub fn qudit_fibonacci_table(d: u64, m: u32) -> Result<Vec<ExactInteger>> {
    if d < 2 {
        return Err(Error::domain(format!("alphabet size must be >= 2, got {d}")));
    }
    check_index(m as i64)?;
    let coef = BigInt::from(d - 1);
    let mut out = Vec::with_capacity(m as usize + 1);
    out.push(BigInt::zero());
    if m >= 1 {
        out.push(BigInt::one());
    }
    for i in 2..=m as usize {
        let next = &coef * (&out[i - 1] + &out[i - 2]);
        out.push(next);
    }
    Ok(out)
}

/// The golden ratio and its conjugate `phi' = 1 - phi = -1/phi`.
#[derive(Debug, Clone)]
pub struct GoldenRatioPair {
    pub phi: HighPrecision,
    pub phi_prime: HighPrecision,
}

impl GoldenRatioPair {
    /// Both values with `digits` fractional decimal digits.
    pub fn new(digits: u32) -> Self {
        let one = HighPrecision::from_integer(&BigInt::one(), digits);
        let two = HighPrecision::from_integer(&BigInt::from(2), digits);
        let root5 = HighPrecision::sqrt_of(&BigInt::from(5), digits);
        let phi = one.add(&root5).div(&two);
        let phi_prime = one.sub(&phi);
        GoldenRatioPair { phi, phi_prime }
    }
}

/// Evaluates `(phi^n - phi'^n) / (phi - phi')` in fixed point.
///
/// `precision` counts significant decimal digits. The result carries
/// `precision - ceil(n log10 phi)` fractional digits, and at least two of
/// them must remain for the value to resolve its integer part.
pub fn binet_evaluate(n: u32, precision: u32) -> Result<HighPrecision> {
    if precision < 15 {
        return Err(Error::Precision(format!(
            "precision must be at least 15 digits, got {precision}"
        )));
    }
    let int_digits = (n as f64 * LOG10_PHI).ceil() as i64;
    let frac_digits = precision as i64 - int_digits;
    if frac_digits < 2 {
        return Err(Error::Precision(format!(
            "{precision} digits cannot resolve F_{n} (needs more than {})",
            int_digits + 2
        )));
    }
    let guard = 10 + (n.max(1) as f64).log10().ceil() as u32;
    let working = precision + guard;
    let pair = GoldenRatioPair::new(working);
    let numer = pair.phi.powi(n as u64).sub(&pair.phi_prime.powi(n as u64));
    let denom = pair.phi.sub(&pair.phi_prime);
    Ok(numer.div(&denom).rescale(frac_digits as u32))
}

/// Which consecutive-term ratio [`ratio_limit`] reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioKind {
    /// `A_{n+1} / A_n = F_n / F_{n-1}`, tends to `phi`.
    Count,
    /// `P_{n+1} / P_n = F_n / (2 F_{n-1})`, tends to `phi / 2`.
    Probability,
}

/// Exact consecutive-term ratio at index `n >= 3`.
pub fn ratio_limit(kind: RatioKind, n: i64) -> Result<ExactRational> {
    if n < 3 {
        return Err(Error::domain(format!("ratio index must be >= 3, got {n}")));
    }
    let num = fibonacci(n)?;
    let den = fibonacci(n - 1)?;
    let den = match kind {
        RatioKind::Count => den,
        RatioKind::Probability => den * 2u8,
    };
    Ok(BigRational::new(num, den))
}

/// Renders an exact ratio with `digits` fractional digits.
pub fn render_ratio(value: &ExactRational, digits: u32) -> HighPrecision {
    HighPrecision::from_rational(value, digits)
}
