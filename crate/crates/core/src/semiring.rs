//! Exact commutative semirings.
//!
//! A [`Semiring`] names one of seven fixed structures; a [`Weight`] is an
//! element tagged with the representation it uses. Every operation is exact.

use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The supported semirings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Semiring {
    /// ({0,1}, ∨, ∧, 0, 1)
    Boolean,
    /// (ℕ, +, ·, 0, 1) with arbitrary precision.
    Natural,
    /// (ℚ, +, ·, 0, 1), the field of rationals.
    Rational,
    /// (ℤ ∪ {+∞}, min, +, +∞, 0)
    Tropical,
    /// (ℤ ∪ {−∞}, max, +, −∞, 0)
    Arctic,
    /// ([0,1] ∩ ℚ, max, ·, 0, 1)
    Viterbi,
    /// ([0,1] ∩ ℚ, max, min, 0, 1)
    Fuzzy,
}

/// Structural properties of a semiring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassFlags {
    pub additively_locally_finite: bool,
    pub locally_finite: bool,
    pub field: bool,
    pub zero_sum_free: bool,
}

/// An element of some semiring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weight {
    Bool(bool),
    Nat(BigUint),
    Rat(BigRational),
    /// `None` is +∞.
    Tropical(Option<BigInt>),
    /// `None` is −∞.
    Arctic(Option<BigInt>),
    /// A rational in [0,1], used by the viterbi and fuzzy semirings.
    Unit(BigRational),
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Bool(b) => f.write_str(if *b { "1" } else { "0" }),
            Weight::Nat(n) => write!(f, "{n}"),
            Weight::Rat(r) | Weight::Unit(r) => write!(f, "{r}"),
            Weight::Tropical(None) => f.write_str("inf"),
            Weight::Arctic(None) => f.write_str("-inf"),
            Weight::Tropical(Some(v)) | Weight::Arctic(Some(v)) => write!(f, "{v}"),
        }
    }
}

enum Token {
    Int(BigInt),
    Rat(BigRational),
    PosInf,
    NegInf,
}

fn lex(s: &str) -> Option<Token> {
    fn int(s: &str) -> Option<BigInt> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    }
    match s {
        "inf" => return Some(Token::PosInf),
        "-inf" => return Some(Token::NegInf),
        _ => {}
    }
    match s.split_once('/') {
        None => int(s).map(Token::Int),
        Some((n, d)) => {
            let n = int(n)?;
            if d.is_empty() || d.starts_with('0') || !d.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let d: BigInt = d.parse().ok()?;
            Some(Token::Rat(BigRational::new(n, d)))
        }
    }
}

impl Semiring {
    /// Every supported semiring.
    pub const ALL: [Semiring; 7] = [
        Semiring::Boolean,
        Semiring::Natural,
        Semiring::Rational,
        Semiring::Tropical,
        Semiring::Arctic,
        Semiring::Viterbi,
        Semiring::Fuzzy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Semiring::Boolean => "boolean",
            Semiring::Natural => "natural",
            Semiring::Rational => "rational",
            Semiring::Tropical => "tropical",
            Semiring::Arctic => "arctic",
            Semiring::Viterbi => "viterbi",
            Semiring::Fuzzy => "fuzzy",
        }
    }

    /// Looks a semiring up by name. `integer-rational-field`, `field` and `rationals` name [`Semiring::Rational`].
    pub fn from_name(name: &str) -> Result<Semiring> {
        Ok(match name {
            "boolean" | "bool" => Semiring::Boolean,
            "natural" | "nat" => Semiring::Natural,
            "rational" | "rationals" | "field" | "integer-rational-field" => Semiring::Rational,
            "tropical" => Semiring::Tropical,
            "arctic" => Semiring::Arctic,
            "viterbi" => Semiring::Viterbi,
            "fuzzy" => Semiring::Fuzzy,
            _ => return Err(Error::UnknownSemiring(name.to_string())),
        })
    }

    pub fn flags(self) -> ClassFlags {
        match self {
            Semiring::Boolean | Semiring::Fuzzy => ClassFlags {
                additively_locally_finite: true,
                locally_finite: true,
                field: false,
                zero_sum_free: true,
            },
            Semiring::Natural => ClassFlags { zero_sum_free: true, ..ClassFlags::default() },
            Semiring::Rational => ClassFlags { field: true, ..ClassFlags::default() },
            Semiring::Tropical | Semiring::Arctic | Semiring::Viterbi => ClassFlags {
                additively_locally_finite: true,
                zero_sum_free: true,
                ..ClassFlags::default()
            },
        }
    }

    /// True if `a + a = a` for every element.
    pub fn is_idempotent(self) -> bool {
        !matches!(self, Semiring::Natural | Semiring::Rational)
    }

    pub fn zero(self) -> Weight {
        match self {
            Semiring::Boolean => Weight::Bool(false),
            Semiring::Natural => Weight::Nat(BigUint::zero()),
            Semiring::Rational => Weight::Rat(BigRational::zero()),
            Semiring::Tropical => Weight::Tropical(None),
            Semiring::Arctic => Weight::Arctic(None),
            Semiring::Viterbi | Semiring::Fuzzy => Weight::Unit(BigRational::zero()),
        }
    }

    pub fn one(self) -> Weight {
        match self {
            Semiring::Boolean => Weight::Bool(true),
            Semiring::Natural => Weight::Nat(BigUint::one()),
            Semiring::Rational => Weight::Rat(BigRational::one()),
            Semiring::Tropical => Weight::Tropical(Some(BigInt::zero())),
            Semiring::Arctic => Weight::Arctic(Some(BigInt::zero())),
            Semiring::Viterbi | Semiring::Fuzzy => Weight::Unit(BigRational::one()),
        }
    }

    /// The `n`-fold sum `1 + … + 1`.
    pub fn count(self, n: u64) -> Weight {
        match self {
            Semiring::Natural => Weight::Nat(BigUint::from(n)),
            Semiring::Rational => Weight::Rat(BigRational::from_integer(BigInt::from(n))),
            _ if n == 0 => self.zero(),
            _ => self.one(),
        }
    }

    pub fn is_zero(self, w: &Weight) -> bool {
        match w {
            Weight::Bool(b) => !b,
            Weight::Nat(n) => n.is_zero(),
            Weight::Rat(r) | Weight::Unit(r) => r.is_zero(),
            Weight::Tropical(v) | Weight::Arctic(v) => v.is_none(),
        }
    }

    pub fn is_one(self, w: &Weight) -> bool {
        *w == self.one()
    }

    /// True if `w` is an element of this semiring.
    pub fn admits(self, w: &Weight) -> bool {
        match (self, w) {
            (Semiring::Boolean, Weight::Bool(_))
            | (Semiring::Natural, Weight::Nat(_))
            | (Semiring::Rational, Weight::Rat(_))
            | (Semiring::Tropical, Weight::Tropical(_))
            | (Semiring::Arctic, Weight::Arctic(_)) => true,
            (Semiring::Viterbi | Semiring::Fuzzy, Weight::Unit(r)) => {
                !r.is_negative() && *r <= BigRational::one()
            }
            _ => false,
        }
    }

    fn require(self, w: &Weight) -> Result<()> {
        if self.admits(w) {
            Ok(())
        } else {
            Err(Error::KindMismatch { semiring: self.name(), weight: w.to_string() })
        }
    }

    /// Checked semiring sum.
    pub fn add(self, a: &Weight, b: &Weight) -> Result<Weight> {
        self.require(a)?;
        self.require(b)?;
        Ok(self.plus(a, b))
    }

    /// Checked semiring product.
    pub fn mul(self, a: &Weight, b: &Weight) -> Result<Weight> {
        self.require(a)?;
        self.require(b)?;
        Ok(self.times(a, b))
    }

    /// Semiring sum of two elements already known to belong to this semiring.
    ///
    /// # Panics
    /// Panics if the operands use a representation of another semiring.
    pub fn plus(self, a: &Weight, b: &Weight) -> Weight {
        match (self, a, b) {
            (Semiring::Boolean, Weight::Bool(x), Weight::Bool(y)) => Weight::Bool(*x || *y),
            (Semiring::Natural, Weight::Nat(x), Weight::Nat(y)) => Weight::Nat(x + y),
            (Semiring::Rational, Weight::Rat(x), Weight::Rat(y)) => Weight::Rat(x + y),
            (Semiring::Tropical, Weight::Tropical(x), Weight::Tropical(y)) => {
                Weight::Tropical(match (x, y) {
                    (None, v) | (v, None) => v.clone(),
                    (Some(x), Some(y)) => Some(x.min(y).clone()),
                })
            }
            (Semiring::Arctic, Weight::Arctic(x), Weight::Arctic(y)) => Weight::Arctic(match (x, y) {
                (None, v) | (v, None) => v.clone(),
                (Some(x), Some(y)) => Some(x.max(y).clone()),
            }),
            (Semiring::Viterbi | Semiring::Fuzzy, Weight::Unit(x), Weight::Unit(y)) => {
                Weight::Unit(x.max(y).clone())
            }
            _ => panic!("operands {a} and {b} are not {} elements", self.name()),
        }
    }

    /// Semiring product of two elements already known to belong to this semiring.
    ///
    /// # Panics
    /// Panics if the operands use a representation of another semiring.
    pub fn times(self, a: &Weight, b: &Weight) -> Weight {
        match (self, a, b) {
            (Semiring::Boolean, Weight::Bool(x), Weight::Bool(y)) => Weight::Bool(*x && *y),
            (Semiring::Natural, Weight::Nat(x), Weight::Nat(y)) => Weight::Nat(x * y),
            (Semiring::Rational, Weight::Rat(x), Weight::Rat(y)) => Weight::Rat(x * y),
            (Semiring::Tropical, Weight::Tropical(x), Weight::Tropical(y)) => {
                Weight::Tropical(match (x, y) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                })
            }
            (Semiring::Arctic, Weight::Arctic(x), Weight::Arctic(y)) => Weight::Arctic(match (x, y) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            }),
            (Semiring::Viterbi, Weight::Unit(x), Weight::Unit(y)) => Weight::Unit(x * y),
            (Semiring::Fuzzy, Weight::Unit(x), Weight::Unit(y)) => Weight::Unit(x.min(y).clone()),
            _ => panic!("operands {a} and {b} are not {} elements", self.name()),
        }
    }

    /// In-place `acc += w`.
    pub fn add_assign(self, acc: &mut Weight, w: &Weight) {
        if self.is_zero(w) {
            return;
        }
        if self.is_zero(acc) {
            *acc = w.clone();
            return;
        }
        *acc = self.plus(acc, w);
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Weight>>(self, items: I) -> Weight {
        let mut acc = self.zero();
        for w in items {
            self.add_assign(&mut acc, w);
        }
        acc
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Weight>>(self, items: I) -> Weight {
        let mut acc = self.one();
        for w in items {
            if self.is_zero(w) {
                return self.zero();
            }
            acc = self.times(&acc, w);
        }
        acc
    }

    /// Parses a weight token: an integer, `p/q`, `inf` or `-inf`.
    pub fn parse(self, s: &str) -> Result<Weight> {
        let s = s.trim();
        let tok = lex(s).ok_or_else(|| Error::MalformedWeight(s.to_string()))?;
        let out_of_range = || Error::WeightOutOfRange { semiring: self.name(), token: s.to_string() };
        let integral = |t: &Token| -> Option<BigInt> {
            match t {
                Token::Int(i) => Some(i.clone()),
                Token::Rat(r) if r.is_integer() => Some(r.to_integer()),
                _ => None,
            }
        };
        let rational = |t: &Token| -> Option<BigRational> {
            match t {
                Token::Int(i) => Some(BigRational::from_integer(i.clone())),
                Token::Rat(r) => Some(r.clone()),
                _ => None,
            }
        };
        match self {
            Semiring::Boolean => match integral(&tok) {
                Some(i) if i.is_zero() => Ok(Weight::Bool(false)),
                Some(i) if i.is_one() => Ok(Weight::Bool(true)),
                _ => Err(out_of_range()),
            },
            Semiring::Natural => match integral(&tok) {
                Some(i) if !i.is_negative() => Ok(Weight::Nat(i.to_biguint().ok_or_else(out_of_range)?)),
                _ => Err(out_of_range()),
            },
            Semiring::Rational => rational(&tok).map(Weight::Rat).ok_or_else(out_of_range),
            Semiring::Tropical => match tok {
                Token::PosInf => Ok(Weight::Tropical(None)),
                ref t => integral(t).map(|i| Weight::Tropical(Some(i))).ok_or_else(out_of_range),
            },
            Semiring::Arctic => match tok {
                Token::NegInf => Ok(Weight::Arctic(None)),
                ref t => integral(t).map(|i| Weight::Arctic(Some(i))).ok_or_else(out_of_range),
            },
            Semiring::Viterbi | Semiring::Fuzzy => match rational(&tok) {
                Some(r) if !r.is_negative() && r <= BigRational::one() => Ok(Weight::Unit(r)),
                _ => Err(out_of_range()),
            },
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Semiring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Semiring> {
        Semiring::from_name(s)
    }
}

/// Formats a weight as its token.
pub fn token(w: &Weight) -> String {
    w.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: Semiring, s: &str) -> Weight {
        k.parse(s).unwrap()
    }

    #[test]
    fn sample_values() {
        let t = Semiring::Tropical;
        assert_eq!(t.add(&w(t, "3"), &w(t, "5")).unwrap(), w(t, "3"));
        let n = Semiring::Natural;
        assert_eq!(n.add(&w(n, "2"), &w(n, "2")).unwrap(), w(n, "4"));
        let v = Semiring::Viterbi;
        assert_eq!(v.mul(&w(v, "1/2"), &w(v, "1/2")).unwrap(), w(v, "1/4"));
        let a = Semiring::Arctic;
        assert_eq!(a.mul(&w(a, "-inf"), &w(a, "5")).unwrap(), a.zero());
        assert_eq!(v.parse("1/64").unwrap().to_string(), "1/64");
        assert_eq!(t.parse("inf").unwrap(), t.zero());
        assert!(n.parse("-1").is_err());
        assert!(v.parse("3/2").is_err());
    }

    #[test]
    fn identities_per_kind() {
        for k in Semiring::ALL {
            assert_ne!(k.zero(), k.one());
            let x = k.one();
            assert_eq!(k.add(&k.zero(), &x).unwrap(), x);
            assert_eq!(k.mul(&k.zero(), &x).unwrap(), k.zero());
            assert_eq!(k.plus(&k.zero(), &k.one()), k.one());
            assert_eq!(k.parse(&k.zero().to_string()).unwrap(), k.zero());
            assert_eq!(k.parse(&k.one().to_string()).unwrap(), k.one());
        }
    }

    #[test]
    fn malformed_tokens() {
        for bad in ["", "-", "1/0", "1/01", "a", "1.5", "+1", "1/-2", "--1"] {
            assert!(matches!(Semiring::Rational.parse(bad), Err(Error::MalformedWeight(_))), "{bad}");
        }
        assert!(Semiring::Rational.parse("inf").is_err());
        assert!(Semiring::Tropical.parse("-inf").is_err());
        assert!(Semiring::Arctic.parse("inf").is_err());
        assert!(Semiring::Boolean.parse("2").is_err());
        assert_eq!(Semiring::Natural.parse("4/2").unwrap(), Semiring::Natural.count(2));
    }

    #[test]
    fn kind_mismatch() {
        let r = Semiring::Natural.add(&Semiring::Boolean.one(), &Semiring::Natural.one());
        assert!(matches!(r, Err(Error::KindMismatch { .. })));
        assert!(!Semiring::Fuzzy.admits(&Weight::Unit(BigRational::new(3.into(), 2.into()))));
    }

    #[test]
    fn flags() {
        assert!(Semiring::Tropical.flags().additively_locally_finite);
        assert!(Semiring::Viterbi.flags().additively_locally_finite);
        assert!(Semiring::Boolean.flags().locally_finite);
        assert!(Semiring::Fuzzy.flags().locally_finite);
        assert!(Semiring::Rational.flags().field);
        assert!(!Semiring::Rational.flags().zero_sum_free);
    }
}
