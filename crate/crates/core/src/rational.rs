//! Exact rational scalars.
//!
//! Every quantity in the crate is a ratio of `i128`s. Values stay tiny (the
//! largest denominators that occur are 30 or so), so overflow is not a
//! practical concern; arithmetic panics rather than wrapping if it ever were.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number.
pub type Q = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as a rational number")]
pub struct ParseRationalError(pub String);

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn frac(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// Parses `"3"`, `"-7/12"`, `"+1/2"` or a terminating decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let t = s.trim();
    let err = || ParseRationalError(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| err())?;
        let d: i128 = d.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, dec)) = t.split_once('.') {
        if dec.is_empty() || !dec.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let neg = int.starts_with('-');
        let int_part: i128 = match int.trim_start_matches(['-', '+']) {
            "" => 0,
            digits => digits.parse().map_err(|_| err())?,
        };
        let scale = 10i128.checked_pow(dec.len() as u32).ok_or_else(err)?;
        let frac_part: i128 = dec.parse().map_err(|_| err())?;
        let v = Q::new(int_part * scale + frac_part, scale);
        return Ok(if neg { -v } else { v });
    }
    t.parse::<i128>().map(Q::from_integer).map_err(|_| err())
}

/// Formats as `"p"` or `"p/q"`.
pub fn fmt_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Greatest common divisor of a list of rationals (non-negative; zero for an
/// all-zero list). `gcd(a/b, c/d) = gcd(a d', c b') / lcm(b, d)` after putting
/// both over the common denominator.
pub fn gcd_q(values: &[Q]) -> Q {
    let l = values.iter().fold(1i128, |acc, v| acc.lcm(v.denom()));
    let g = values
        .iter()
        .map(|v| (v * Q::from_integer(l)).to_integer())
        .fold(0i128, |acc, n| acc.gcd(&n));
    Q::new(g, l)
}

/// Least common multiple of the denominators.
pub fn common_denominator(values: &[Q]) -> i128 {
    values.iter().fold(1i128, |acc, v| acc.lcm(v.denom()))
}

pub fn is_integral(v: &Q) -> bool {
    v.is_integer()
}

pub fn floor_q(v: &Q) -> i128 {
    v.floor().to_integer()
}

pub fn ceil_q(v: &Q) -> i128 {
    v.ceil().to_integer()
}

pub fn abs_q(v: &Q) -> Q {
    v.abs()
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Serde adapter: a rational is written as a `"p/q"` string, and read back
/// from either such a string or a bare JSON integer.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        fmt_q(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = RawQ::deserialize(d)?;
        raw.into_q().map_err(serde::de::Error::custom)
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawQ {
        Int(i64),
        Str(String),
    }

    impl RawQ {
        pub(crate) fn into_q(self) -> Result<Q, ParseRationalError> {
            match self {
                RawQ::Int(n) => Ok(Q::from_integer(n as i128)),
                RawQ::Str(s) => parse_q(&s),
            }
        }
    }
}

/// Serde adapter for `Vec<Q>`.
pub mod serde_q_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&fmt_q(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw: Vec<serde_q::RawQ> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_q().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Option<Q>`; `None` is `null`.
pub mod serde_opt_q {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(fmt_q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let raw: Option<serde_q::RawQ> = Option::deserialize(d)?;
        raw.map(|r| r.into_q().map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Display wrapper for a rational.
pub struct DisplayQ<'a>(pub &'a Q);

impl fmt::Display for DisplayQ<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_q(self.0))
    }
}
