//! Exact values for every slot domain the catalog maps act on.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::RatFunc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("cannot parse `{text}` as {what}")]
    Parse { text: String, what: &'static str },
    #[error("value `{value}` is outside the domain {domain}")]
    OutOfDomain { value: String, domain: SlotDomain },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("division by the additive absorber")]
    DivisionByAdditiveAbsorber,
}

/// A strictly positive rational in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosRational(BigRational);

impl PosRational {
    pub fn new(value: BigRational) -> Result<Self, ScalarError> {
        if value.is_positive() {
            Ok(PosRational(value))
        } else {
            Err(ScalarError::OutOfDomain {
                value: format_rational(&value),
                domain: SlotDomain::PosRational,
            })
        }
    }

    pub fn from_ints(num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::Parse {
                text: format!("{num}/{den}"),
                what: "a rational",
            });
        }
        Self::new(BigRational::new(num.into(), den.into()))
    }

    pub fn one() -> Self {
        PosRational(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }
}

impl fmt::Display for PosRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for PosRational {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosRational::new(parse_rational(s)?)
    }
}

/// Prints `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q` or `p` (signed integers, nonzero denominator) into lowest terms.
pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let err = || ScalarError::Parse {
        text: s.to_string(),
        what: "a rational",
    };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// An integer in the tropical (min-plus) world. Catalog maps use it for
/// `Z_{>=0}` slots; negative values are representable for intermediate
/// formulas and rejected at slot boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropInt(pub BigInt);

impl TropInt {
    pub fn new(v: impl Into<BigInt>) -> Self {
        TropInt(v.into())
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }
}

impl fmt::Display for TropInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bit(u8);

impl Bit {
    pub const ZERO: Bit = Bit(0);
    pub const ONE: Bit = Bit(1);

    pub fn new(v: u8) -> Option<Bit> {
        (v <= 1).then_some(Bit(v))
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The set a slot of a product space ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SlotDomain {
    /// Positive rationals, the exact stand-in for the positive reals.
    PosRational,
    /// Pairs of positive rationals (two-component maps).
    PosRationalPair,
    /// Nonnegative integers.
    NonNegInt,
    /// `{0, 1}`.
    Bit,
}

impl SlotDomain {
    /// Domains on which the birational maps act; only these admit symbolic values.
    pub fn is_birational(self) -> bool {
        matches!(self, SlotDomain::PosRational | SlotDomain::PosRationalPair)
    }

    pub fn is_discrete(self) -> bool {
        !self.is_birational()
    }

    /// Parses one slot's text: `p/q`, `a:b` for pairs, integers otherwise.
    pub fn parse_value(self, s: &str) -> Result<Scalar, ScalarError> {
        let s = s.trim();
        match self {
            SlotDomain::PosRational => Ok(Scalar::Rat(s.parse()?)),
            SlotDomain::PosRationalPair => {
                let (a, b) = s.split_once(':').ok_or_else(|| ScalarError::Parse {
                    text: s.to_string(),
                    what: "a pair `a:b`",
                })?;
                Ok(Scalar::Pair(a.parse()?, b.parse()?))
            }
            SlotDomain::NonNegInt | SlotDomain::Bit => {
                let v: BigInt = s.parse().map_err(|_| ScalarError::Parse {
                    text: s.to_string(),
                    what: "an integer",
                })?;
                Scalar::from_int(self, v)
            }
        }
    }
}

impl fmt::Display for SlotDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlotDomain::PosRational => "Q>0",
            SlotDomain::PosRationalPair => "(Q>0)^2",
            SlotDomain::NonNegInt => "Z>=0",
            SlotDomain::Bit => "{0,1}",
        })
    }
}

/// One slot value. Symbolic variants stand in for the birational domains.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rat(PosRational),
    Pair(PosRational, PosRational),
    Int(TropInt),
    Bit(Bit),
    Sym(RatFunc),
    SymPair(RatFunc, RatFunc),
}

impl Scalar {
    pub fn rat(num: i64, den: i64) -> Scalar {
        Scalar::Rat(PosRational::from_ints(num, den).expect("positive rational"))
    }

    pub fn int(v: i64) -> Scalar {
        Scalar::Int(TropInt::new(v))
    }

    pub fn bit(v: u8) -> Scalar {
        Scalar::Bit(Bit::new(v).expect("bit is 0 or 1"))
    }

    /// Builds an integer-valued slot, checking closure for the domain.
    pub fn from_int(domain: SlotDomain, v: BigInt) -> Result<Scalar, ScalarError> {
        let out = |v: &BigInt| ScalarError::OutOfDomain {
            value: v.to_string(),
            domain,
        };
        match domain {
            SlotDomain::NonNegInt if !v.is_negative() => Ok(Scalar::Int(TropInt(v))),
            SlotDomain::Bit if v.is_zero() => Ok(Scalar::Bit(Bit::ZERO)),
            SlotDomain::Bit if v.is_one() => Ok(Scalar::Bit(Bit::ONE)),
            _ => Err(out(&v)),
        }
    }

    /// Integer view of a discrete slot.
    pub fn as_int(&self) -> Option<BigInt> {
        match self {
            Scalar::Int(t) => Some(t.0.clone()),
            Scalar::Bit(b) => Some(BigInt::from(b.0)),
            _ => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Scalar::Sym(_) | Scalar::SymPair(..))
    }

    /// Whether this value lies in `domain`.
    pub fn fits(&self, domain: SlotDomain) -> bool {
        match (self, domain) {
            (Scalar::Rat(_) | Scalar::Sym(_), SlotDomain::PosRational) => true,
            (Scalar::Pair(..) | Scalar::SymPair(..), SlotDomain::PosRationalPair) => true,
            (Scalar::Int(t), SlotDomain::NonNegInt) => !t.0.is_negative(),
            (Scalar::Bit(_), SlotDomain::Bit) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => write!(f, "{q}"),
            Scalar::Pair(a, b) => write!(f, "{a}:{b}"),
            Scalar::Int(t) => write!(f, "{t}"),
            Scalar::Bit(b) => write!(f, "{b}"),
            Scalar::Sym(r) => write!(f, "{r}"),
            Scalar::SymPair(a, b) => write!(f, "{a}:{b}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_is_canonical() {
        let q: PosRational = "6/4".parse().unwrap();
        assert_eq!(q.to_string(), "3/2");
        let q: PosRational = "5".parse().unwrap();
        assert_eq!(q.to_string(), "5");
        assert!("-1/2".parse::<PosRational>().is_err());
        assert!("0".parse::<PosRational>().is_err());
        assert!("1/0".parse::<PosRational>().is_err());
        assert!("x".parse::<PosRational>().is_err());
    }

    #[test]
    fn slot_parsing_respects_domains() {
        assert_eq!(
            SlotDomain::PosRationalPair.parse_value("1/2:3").unwrap(),
            Scalar::Pair(PosRational::from_ints(1, 2).unwrap(), PosRational::from_ints(3, 1).unwrap())
        );
        assert_eq!(SlotDomain::Bit.parse_value("1").unwrap(), Scalar::bit(1));
        assert!(SlotDomain::Bit.parse_value("2").is_err());
        assert!(SlotDomain::NonNegInt.parse_value("-1").is_err());
        assert_eq!(SlotDomain::NonNegInt.parse_value("7").unwrap(), Scalar::int(7));
    }

    #[test]
    fn fits_checks_sign_and_kind() {
        assert!(Scalar::int(0).fits(SlotDomain::NonNegInt));
        assert!(!Scalar::int(-1).fits(SlotDomain::NonNegInt));
        assert!(!Scalar::int(1).fits(SlotDomain::Bit));
        assert!(Scalar::rat(1, 3).fits(SlotDomain::PosRational));
    }
}
