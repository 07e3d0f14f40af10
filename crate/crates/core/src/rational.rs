//! Exact rational values and their text form.
//!
//! Rationals appear in instance files as strings, either an integer `"p"` or
//! a fraction `"p/q"`. Parsing rejects a zero denominator; formatting always
//! emits the reduced form with a positive denominator and drops `/1`.

use num::BigRational;
use num::{BigInt, One};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatioError {
    #[error("malformed rational '{0}', expected 'p' or 'p/q'")]
    Malformed(String),
    #[error("zero denominator in rational '{0}'")]
    ZeroDenominator(String),
}

pub fn parse_ratio(s: &str) -> Result<Rational, RatioError> {
    let mut parts = s.splitn(2, '/');
    let numer_txt = parts.next().unwrap_or("");
    let numer: BigInt = numer_txt
        .parse()
        .map_err(|_| RatioError::Malformed(s.to_string()))?;
    match parts.next() {
        None => Ok(Rational::from_integer(numer)),
        Some(denom_txt) => {
            let denom: BigInt = denom_txt
                .parse()
                .map_err(|_| RatioError::Malformed(s.to_string()))?;
            if denom == BigInt::from(0) {
                return Err(RatioError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

pub fn format_ratio(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `1/n` for positive integer `n`.
pub fn unit_fraction(n: u64) -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(n))
}

/// `1/2^n`; exact for any `n`.
pub fn half_pow(n: u32) -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(2).pow(n))
}

/// Smallest integer `k` with `k >= r`.
pub fn ceil_to_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}
