//! Small helpers around `BigRational`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(Rational::zero());
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Fall back to a ratio of scaled parts for huge operands.
        let n = q.numer().to_f64().unwrap_or(f64::MAX);
        let d = q.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

pub fn sign(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// `p/q` in lowest terms, or `p` for integers.
pub fn fmt_rational(q: &Rational) -> String {
    q.to_string()
}

/// Twelve significant digits, with `-0` folded to `0`.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x.is_infinite() { format!("{x}") } else { "0".into() };
    }
    let s = format!("{:.*e}", 11, x);
    let v: f64 = s.parse().unwrap();
    let mut out = if v.abs() < 1e-4 || v.abs() >= 1e15 { format!("{v:e}") } else { format!("{v}") };
    if out == "-0" {
        out = "0".into();
    }
    out
}
