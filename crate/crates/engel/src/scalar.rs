//! Numeric backends shared by the algebra layer.
//!
//! Every algebraic identity in this crate is checked over exact rationals;
//! quadrature and optimization run over `f64`. The [`Scalar`] trait is the
//! small arithmetic surface both backends expose, so group operations,
//! brackets and tangent 2-vectors are written once.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`; panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses a rational literal: an integer, a fraction `a/b`, or a decimal.
/// Decimals convert exactly (`0.25` becomes `1/4`), so no rounding ever
/// enters the exact core.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part == "-" || int_part.is_empty() {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        let frac: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rational::new(frac, scale);
        let int = Rational::from_integer(int);
        return Some(if negative { int - frac } else { int + frac });
    }
    let n: BigInt = text.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Common arithmetic for the exact and floating backends.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(n: i64, d: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Multiplication by a small rational constant.
    fn scale(&self, n: i64, d: i64) -> Self;
    /// Exact zero test. For `f64` this is bitwise; tolerance-based decisions
    /// take an explicit threshold at the call site.
    fn is_zero_val(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn scale(&self, n: i64, d: i64) -> Self {
        self * (n as f64) / (d as f64)
    }
    fn is_zero_val(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        rat(n, d)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn scale(&self, n: i64, d: i64) -> Self {
        self * rat(n, d)
    }
    fn is_zero_val(&self) -> bool {
        self.is_zero()
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// Rounds a rational to the nearest `f64`, robust to huge numerators.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Fall back to a scaled division when either side overflows f64.
    let bits = r.numer().bits().max(r.denom().bits()) as i64;
    let shift = bits - 52;
    if shift > 0 {
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    } else {
        f64::NAN
    }
}

/// Signum as a rational-friendly helper.
pub fn rational_abs(r: &Rational) -> Rational {
    r.abs()
}
