//! Exact arithmetic: rationals, dense rational matrices and integer lattices.

mod intmat;
pub mod interval;
mod matrix;

pub use intmat::{hermite_normal_form, integer_kernel, IntMatrix};
pub use matrix::QMatrix;
pub(crate) use matrix::kernel_vectors;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for the rational `p/q`. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for the integer `p` as a rational.
pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// `max(|a|, b)` for `q = a/b` in lowest terms.
pub fn height(q: &Rational) -> BigInt {
    let num = q.numer().abs();
    let den = q.denom().clone();
    if num > den {
        num
    } else {
        den
    }
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p/q"` or `"p"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Serde adapters for rationals written as strings.
pub mod serde_rational {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = RationalRepr::deserialize(d)?;
        match raw {
            RationalRepr::Text(s) => parse_rational(&s).map_err(de::Error::custom),
            RationalRepr::Int(i) => Ok(int(i)),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum RationalRepr {
        Text(String),
        Int(i64),
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format_rational(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            let raw: Vec<RationalRepr> = Vec::deserialize(d)?;
            raw.into_iter()
                .map(|r| match r {
                    RationalRepr::Text(s) => parse_rational(&s).map_err(de::Error::custom),
                    RationalRepr::Int(i) => Ok(int(i)),
                })
                .collect()
        }
    }
}
