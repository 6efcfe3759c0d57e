//! Arbitrary-precision rationals, always stored reduced with a positive
//! denominator. Thin wrapper over `num::BigRational` fixing the parsing,
//! rendering and serialization conventions used across the crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[derive(Serialize, Deserialize)]
#[serde(try_from = "RationalRepr", into = "RationalRepr")]
pub struct Rational(BigRational);

/// Wire format: both parts as decimal strings so arbitrary precision
/// survives JSON number parsers.
#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: String,
    den: String,
}

impl TryFrom<RationalRepr> for Rational {
    type Error = Error;

    fn try_from(repr: RationalRepr) -> Result<Self> {
        let num = parse_bigint(&repr.num)?;
        let den = parse_bigint(&repr.den)?;
        Rational::new(num, den)
    }
}

impl From<Rational> for RationalRepr {
    fn from(r: Rational) -> Self {
        RationalRepr {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    BigInt::from_str(s).map_err(|e| Error::InvalidNumber {
        input: s.to_string(),
        reason: e.to_string(),
    })
}

impl Rational {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn from_int(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Rational(BigRational::from_integer(v))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(num::pow::pow(self.0.clone(), exp as usize))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // falls off f64 range only for astronomically large values;
            // signum keeps comparisons sane if it ever happens
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    /// Accepts `a/b`, plain integers, and decimal literals. Decimals map to
    /// exact rationals: `0.40` parses to 2/5.
    pub fn parse(input: &str) -> Result<Self> {
        let s = input.trim();
        let err = |reason: &str| Error::InvalidNumber {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Err(err("empty string"));
        }
        if let Some((num, den)) = s.split_once('/') {
            let num = BigInt::from_str(num.trim()).map_err(|_| err("bad numerator"))?;
            let den = BigInt::from_str(den.trim()).map_err(|_| err("bad denominator"))?;
            return Rational::new(num, den);
        }
        let (sign, digits) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((i, f)) => (i, f),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err("no digits"));
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(err("expected digits, '.' or '/'"));
        }
        let mut num = if int_part.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(int_part).unwrap()
        };
        let mut den = BigInt::one();
        for b in frac_part.bytes() {
            num = num * 10 + (b - b'0');
            den *= 10;
        }
        Rational::new(num * sign, den)
    }

    /// Decimal rendering. Exact (and marked so) when the reduced denominator
    /// is of the form 2^a 5^b; otherwise rounded half-up to `sig` significant
    /// digits. Returns the string and whether it is exact.
    pub fn decimal(&self, sig: usize) -> (String, bool) {
        if self.is_zero() {
            return ("0".to_string(), true);
        }
        let sig = sig.max(1);
        let neg = self.is_negative();
        let num = self.numer().abs();
        let den = self.denom().clone();

        let mut rest = den.clone();
        let (two, five) = (BigInt::from(2), BigInt::from(5));
        let mut twos = 0u32;
        let mut fives = 0u32;
        while (&rest % &two).is_zero() {
            rest /= &two;
            twos += 1;
        }
        while (&rest % &five).is_zero() {
            rest /= &five;
            fives += 1;
        }

        if rest.is_one() {
            let k = twos.max(fives);
            let scaled = &num * BigInt::from(10).pow(k) / &den;
            let mut text = render_fixed(&scaled, k as usize);
            if text.contains('.') {
                while text.ends_with('0') {
                    text.pop();
                }
                if text.ends_with('.') {
                    text.pop();
                }
            }
            return (prepend_sign(text, neg), true);
        }

        // Non-terminating expansion: positional rendering with `sig`
        // significant digits, rounded half-up in a single step.
        let int_part = &num / &den;
        let int_digits = if int_part.is_zero() {
            0
        } else {
            int_part.to_string().len()
        };
        let text = if int_digits >= sig {
            let drop = int_digits - sig;
            let unit = BigInt::from(10).pow(drop as u32);
            let rounded = round_half_up(&num, &(&den * &unit)) * unit;
            render_fixed(&rounded, 0)
        } else if int_digits > 0 {
            let frac = sig - int_digits;
            let scaled = round_half_up(&(&num * BigInt::from(10).pow(frac as u32)), &den);
            render_fixed(&scaled, frac)
        } else {
            // leading zeros between the point and the first significant digit
            let mut zeros = 0usize;
            let mut probe = &num * 10;
            while probe < den {
                zeros += 1;
                probe *= 10;
            }
            let frac = zeros + sig;
            let scaled = round_half_up(&(&num * BigInt::from(10).pow(frac as u32)), &den);
            render_fixed(&scaled, frac)
        };
        (prepend_sign(text, neg), false)
    }
}

fn round_half_up(num: &BigInt, den: &BigInt) -> BigInt {
    (num * 2 + den) / (den * 2)
}

fn render_fixed(value: &BigInt, frac_digits: usize) -> String {
    let mut s = value.to_string();
    if frac_digits == 0 {
        return s;
    }
    while s.len() <= frac_digits {
        s.insert(0, '0');
    }
    s.insert(s.len() - frac_digits, '.');
    s
}

fn prepend_sign(text: String, neg: bool) -> String {
    if neg {
        format!("-{text}")
    } else {
        text
    }
}

/// Shorthand used heavily in tests and table constructions.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den)).expect("nonzero denominator")
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rational::parse(s)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

pub fn cmp_rationals(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}
