//! Small helpers around the two rational types used throughout the crate:
//! `Q` (machine-sized, for exponents and tropical coordinates) and
//! `BigRational` (for series coefficients, which can grow without bound).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;

pub type Q = Ratio<i64>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_big(x: &Q) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// Formats a rational the way the expression grammar reads it back: `3`, `-1/2`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_big(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `3`, `-7`, `1/2`, `-5/3` (surrounding whitespace allowed).
pub fn parse_q(text: &str) -> Option<Q> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: i64 = num.parse().ok()?;
    let d: i64 = den.parse().ok()?;
    if d == 0 {
        return None;
    }
    Some(Q::new(n, d))
}

/// Comma separated rationals, optionally wrapped in parentheses.
pub fn parse_q_tuple(text: &str) -> Option<Vec<Q>> {
    let inner = text
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .trim();
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(parse_q).collect()
}

pub fn fmt_q_tuple(xs: &[Q]) -> String {
    let parts: Vec<String> = xs.iter().map(fmt_q).collect();
    format!("({})", parts.join(", "))
}

/// The primitive integer vector on the ray through `v`; the zero vector maps
/// to itself.
pub fn primitive(v: &[Q]) -> Vec<Q> {
    if v.iter().all(Zero::is_zero) {
        return v.to_vec();
    }
    let den = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * den).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    ints.iter().map(|x| q(x / g)).collect()
}

/// `ceil(x)` for a rational.
pub fn ceil_q(x: &Q) -> i64 {
    x.ceil().to_integer()
}
