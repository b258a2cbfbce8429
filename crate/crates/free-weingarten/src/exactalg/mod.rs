//! Exact scalar, polynomial, matrix, and truncated-power-series arithmetic.
//!
//! Everything here is value-semantic and exact: scalars are arbitrary-precision
//! rationals, matrices invert by fraction-free elimination, and series carry an
//! explicit truncation order that no operation reads past.

mod matrix;
mod poly;
mod series;

pub use matrix::RationalMatrix;
pub use poly::RationalPolynomial;
pub use series::FormalSeries;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact scalar: an arbitrary-precision rational, always reduced, denominator
/// positive, canonical zero `0/1`.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Shorthand for `p/q`. Panics on `q = 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact integer power `base^exp` as a rational.
pub fn int_pow(base: i64, exp: u32) -> Rational {
    Rational::from_integer(BigInt::from(base).pow(exp))
}

/// Canonical wire form: `"p/q"` with the reduced numerator and positive
/// denominator, e.g. `5/6`, `-1/20`, `12/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a bare integer string `"p"`.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let bad = || Error::BadRational {
        input: input.to_string(),
    };
    let s = input.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (s, None),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Rounds toward negative infinity; exact counterpart of `[t*n]` truncation.
pub fn floor_to_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// `|a - b|` for rationals.
pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}
