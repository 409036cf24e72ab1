//! Exact rational helpers shared by every module.
//!
//! Rationals travel through text and JSON as `"p/q"` (or `"p"` when the
//! denominator is one), always reduced, with the sign on the numerator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational used throughout the crate.
pub type Q = BigRational;

/// Longest numerator/denominator digit string accepted by [`parse_rational`].
const MAX_DIGITS: usize = 4096;

pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

/// Binomial coefficient `C(i, 2)` as a rational.
pub fn choose2(i: usize) -> Q {
    let i = i as i64;
    int(i * (i - 1) / 2)
}

/// Parses `p`, `-p`, `p/q` or `-p/q` with `q > 0`; the result is reduced.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (body, None),
    };
    let digits = |t: &str| !t.is_empty() && t.len() <= MAX_DIGITS && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !den.map_or(true, digits) {
        return Err(bad());
    }
    let mut p: BigInt = num.parse().map_err(|_| bad())?;
    if neg {
        p = -p;
    }
    let q: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(p, q))
}

/// Canonical text form, the inverse of [`parse_rational`] on reduced values.
pub fn format_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn is_integer(q: &Q) -> bool {
    q.denom().is_one()
}

pub fn to_i64(q: &Q) -> Option<i64> {
    if is_integer(q) {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Distance from `q` to its floor, in `[0, 1)`.
pub fn fractional_part(q: &Q) -> Q {
    q - q.floor()
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// The zero vector maps to the zero vector.
pub fn primitive_integer_vector(v: &[Q]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sign(q: &Q) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}
