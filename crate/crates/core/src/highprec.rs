//! Fixed-point decimal reals backed by big integers.
//!
//! A [`HighPrecision`] value is `mantissa / 10^scale`. It is only as exact as
//! the caller's choice of `scale`; all rounding is to nearest, ties away from
//! negative infinity.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ExactRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighPrecision {
    mantissa: BigInt,
    scale: u32,
}

fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u8), exp as usize)
}

/// `round(num / den)` for `den > 0`.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2u8);
    (num * &two + den).div_floor(&(den * two))
}

impl HighPrecision {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        HighPrecision { mantissa, scale }
    }

    pub fn from_integer(value: &BigInt, scale: u32) -> Self {
        HighPrecision::new(value * pow10(scale), scale)
    }

    pub fn from_rational(value: &ExactRational, scale: u32) -> Self {
        let num = value.numer() * pow10(scale);
        HighPrecision::new(div_round(&num, value.denom()), scale)
    }

    /// `sqrt(value)` truncated to `scale` fractional digits.
    pub fn sqrt_of(value: &BigInt, scale: u32) -> Self {
        assert!(!value.is_negative(), "square root of a negative number");
        let radicand = value * pow10(2 * scale);
        HighPrecision::new(radicand.sqrt(), scale)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Re-expresses the value with `scale` fractional digits.
    pub fn rescale(&self, scale: u32) -> Self {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                HighPrecision::new(&self.mantissa * pow10(scale - self.scale), scale)
            }
            Ordering::Less => HighPrecision::new(
                div_round(&self.mantissa, &pow10(self.scale - scale)),
                scale,
            ),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let s = self.scale.max(other.scale);
        HighPrecision::new(self.rescale(s).mantissa + other.rescale(s).mantissa, s)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let s = self.scale.max(other.scale);
        HighPrecision::new(self.rescale(s).mantissa - other.rescale(s).mantissa, s)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let s = self.scale.max(other.scale);
        let raw = &self.mantissa * &other.mantissa;
        let drop = self.scale + other.scale - s;
        HighPrecision::new(div_round(&raw, &pow10(drop)), s)
    }

    /// Quotient at the larger of the two scales. Panics on division by zero.
    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.mantissa.is_zero(), "division by zero");
        let s = self.scale.max(other.scale);
        let mut num = &self.mantissa * pow10(s + other.scale - self.scale);
        let mut den = other.mantissa.clone();
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        HighPrecision::new(div_round(&num, &den), s)
    }

    pub fn powi(&self, exp: u64) -> Self {
        let mut result = HighPrecision::from_integer(&BigInt::one(), self.scale);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn abs(&self) -> Self {
        HighPrecision::new(self.mantissa.abs(), self.scale)
    }

    /// Nearest integer.
    pub fn round(&self) -> BigInt {
        div_round(&self.mantissa, &pow10(self.scale))
    }

    /// `|self - other| < 10^-digits`; `digits` may be negative.
    pub fn is_within(&self, other: &Self, digits: i64) -> bool {
        let diff = self.sub(other).abs();
        let s = diff.scale as i64;
        // compare diff.mantissa < 10^(s - digits)
        let exp = s - digits;
        if exp < 0 {
            return diff.mantissa.is_zero();
        }
        diff.mantissa < pow10(exp as u32)
    }

    pub fn to_f64(&self) -> f64 {
        // keep ~20 significant digits before converting
        let digits = self.mantissa.abs().to_string().len() as u32;
        let keep = 20u32;
        if digits > keep {
            let drop = (digits - keep).min(self.scale);
            let trimmed = self.rescale(self.scale - drop);
            let m = trimmed.mantissa.to_f64().unwrap_or(f64::NAN);
            return m / 10f64.powi(trimmed.scale as i32);
        }
        self.mantissa.to_f64().unwrap_or(f64::NAN) / 10f64.powi(self.scale as i32)
    }
}

impl fmt::Display for HighPrecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.mantissa.magnitude().to_string();
        let sign = if self.mantissa.sign() == Sign::Minus { "-" } else { "" };
        let scale = self.scale as usize;
        if scale == 0 {
            return write!(f, "{sign}{digits}");
        }
        let padded = if digits.len() <= scale {
            format!("{}{}", "0".repeat(scale + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int, frac) = padded.split_at(padded.len() - scale);
        write!(f, "{sign}{int}.{frac}")
    }
}
