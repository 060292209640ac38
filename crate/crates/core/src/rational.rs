//! Exact rationals and their `"p/q"` text form.
//!
//! Every number in the toolkit is a [`Rational`]; there is no floating point
//! on any computational path. The text form is the reduced fraction, with the
//! denominator omitted when it is 1 (`"-3"`, `"7/2"`). Parsing also accepts an
//! explicit `"/1"` and surrounding whitespace.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn format(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses a comma-separated list of rationals, e.g. `"1, -1/2, 0"`.
pub fn parse_list(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse).collect()
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn floor_to_i64(q: &Rational) -> Option<i64> {
    i64::try_from(q.floor().to_integer()).ok()
}

pub fn ceil_to_i64(q: &Rational) -> Option<i64> {
    i64::try_from(q.ceil().to_integer()).ok()
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// Serde adapter for a single rational as a `"p/q"` string.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as an array of `"p/q"` strings.
pub mod serde_q_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("6/4").unwrap(), frac(3, 2));
        assert_eq!(parse(" -7 ").unwrap(), int(-7));
        assert_eq!(parse("5/1").unwrap(), int(5));
        assert_eq!(format(&frac(-6, 4)), "-3/2");
        assert_eq!(format(&int(0)), "0");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert_eq!(parse_list("1, -1/2,0").unwrap(), vec![int(1), frac(-1, 2), int(0)]);
    }

    #[test]
    fn denominators_stay_positive() {
        let q = parse("3/-6").unwrap();
        assert_eq!(format(&q), "-1/2");
        assert!(q.denom().is_positive());
    }
}
