//! Exact arithmetic over Z[n] and Q(n).

mod factored;
mod parse;
mod poly;
mod ratfn;

use num_bigint::BigInt;
use thiserror::Error;

pub use factored::Factored;
pub use parse::{parse_factored, parse_poly, parse_rational, parse_ratfn};
pub use poly::{poly_gcd, resultant, IntPoly};
pub use ratfn::{ratfn_eval, RatFn};

/// Exact rationals.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("pole at n = {at}")]
    Pole { at: BigInt },
    #[error("cannot parse {input:?} at byte {pos}: {msg}")]
    Parse {
        input: String,
        pos: usize,
        msg: String,
    },
}

/// Shifts `p` by `k`: `q(m) = p(m + k)`.
pub fn poly_shift(p: &IntPoly, k: &BigInt) -> IntPoly {
    p.shift(k)
}

/// Renders a rational as `a` or `a/b`.
pub fn rational_text(q: &Rational) -> String {
    q.to_string()
}

macro_rules! text_serde {
    ($ty:ty, $parse:expr) => {
        impl serde::Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
        impl<'de> serde::Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let text = <std::borrow::Cow<'de, str>>::deserialize(d)?;
                $parse(&text).map_err(serde::de::Error::custom)
            }
        }
    };
}

impl serde::Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Canonical text such as `"3n-2"`, or a coefficient array `[-2, 3]` with the
/// constant term first (entries may be integers or decimal strings).
impl<'de> serde::Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Coeff {
            Int(i64),
            Text(String),
        }
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Coeffs(Vec<Coeff>),
        }
        match Repr::deserialize(d)? {
            Repr::Text(t) => parse_poly(&t).map_err(serde::de::Error::custom),
            Repr::Coeffs(cs) => cs
                .into_iter()
                .map(|c| match c {
                    Coeff::Int(k) => Ok(BigInt::from(k)),
                    Coeff::Text(t) => t
                        .trim()
                        .parse::<BigInt>()
                        .map_err(|e| serde::de::Error::custom(format!("bad coefficient {t:?}: {e}"))),
                })
                .collect::<Result<Vec<_>, _>>()
                .map(IntPoly::from_coeffs),
        }
    }
}
text_serde!(RatFn, parse_ratfn);
text_serde!(Factored, parse_factored);

/// Serde helper writing a [`Rational`] as text, for `#[serde(with = ...)]`.
pub mod rational_serde {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
