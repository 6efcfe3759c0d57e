//! Dense univariate polynomials with rational coefficients, ascending by
//! degree. Trailing zero coefficients are trimmed on construction so equal
//! polynomials compare equal structurally.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::Result;
use crate::rational::{rat, Rational};

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl<'de> Deserialize<'de> for RationalPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(RationalPoly::from_coeffs(Vec::deserialize(d)?))
    }
}

impl RationalPoly {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    /// Convenience constructor from (numerator, denominator) pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        let coeffs = pairs
            .iter()
            .map(|&(n, d)| Rational::new(n.into(), d.into()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(coeffs))
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        RationalPoly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;

    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        RationalPoly::from_coeffs(coeffs)
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;

    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        RationalPoly::from_coeffs(coeffs)
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;

    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        RationalPoly::from_coeffs(coeffs)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;

    fn neg(self) -> RationalPoly {
        RationalPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != Rational::one() {
                        write!(f, "{mag} ")?;
                    }
                    if k == 1 {
                        write!(f, "p")?;
                    } else {
                        write!(f, "p^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// p^k (1-p)^m expanded: coefficient of p^(k+j) is C(m,j) (-1)^j.
pub(crate) fn p_pow_times_q_pow(k: usize, m: usize) -> RationalPoly {
    let mut coeffs = vec![Rational::zero(); k + m + 1];
    let mut binom = num::BigInt::from(1);
    for j in 0..=m {
        let c = Rational::from_bigint(if j % 2 == 0 { binom.clone() } else { -binom.clone() });
        coeffs[k + j] = c;
        if j < m {
            binom = binom * (m - j) / (j + 1);
        }
    }
    RationalPoly::from_coeffs(coeffs)
}

#[allow(dead_code)]
pub(crate) fn poly_p() -> RationalPoly {
    RationalPoly::from_coeffs(vec![Rational::zero(), rat(1, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_trailing_zeros() {
        let p = RationalPoly::from_pairs(&[(1, 2), (0, 1), (0, 1)]).unwrap();
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p, RationalPoly::constant(rat(1, 2)));
        assert!(RationalPoly::from_pairs(&[(0, 1)]).unwrap().is_zero());
        assert_eq!(RationalPoly::zero().degree(), None);
    }

    #[test]
    fn horner_matches_frozen_values() {
        // the two quintics that come up throughout the crate, at p = 2/5
        let maj5 = RationalPoly::from_pairs(&[(0, 1), (15, 8), (-15, 4), (25, 4), (-45, 8), (9, 4)])
            .unwrap();
        assert_eq!(maj5.eval(&rat(2, 5)), rat(5363, 12500));
        let f = RationalPoly::from_pairs(&[(0, 1), (7, 4), (-11, 4), (7, 2), (-5, 2), (1, 1)])
            .unwrap();
        assert_eq!(f.eval(&rat(2, 5)), rat(2689, 6250));
        assert_eq!(&f.eval(&rat(2, 5)) - &maj5.eval(&rat(2, 5)), rat(3, 2500));
    }

    #[test]
    fn ring_ops() {
        let a = RationalPoly::from_pairs(&[(1, 1), (2, 1)]).unwrap(); // 1 + 2p
        let b = RationalPoly::from_pairs(&[(0, 1), (1, 2)]).unwrap(); // p/2
        assert_eq!(
            &a * &b,
            RationalPoly::from_pairs(&[(0, 1), (1, 2), (1, 1)]).unwrap()
        );
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(&a - &a, RationalPoly::zero());
        assert_eq!((-&a).eval(&rat(1, 3)), -a.eval(&rat(1, 3)));
        assert_eq!(a.scale(&rat(3, 1)).coeff(1), rat(6, 1));
    }

    #[test]
    fn q_pow_expansion() {
        // p^1 (1-p)^2 = p - 2p^2 + p^3
        assert_eq!(
            p_pow_times_q_pow(1, 2),
            RationalPoly::from_pairs(&[(0, 1), (1, 1), (-2, 1), (1, 1)]).unwrap()
        );
        assert_eq!(p_pow_times_q_pow(0, 0), RationalPoly::constant(rat(1, 1)));
        // evaluating the expansion agrees with evaluating the factors
        let p = rat(3, 7);
        let q = &Rational::one() - &p;
        let poly = p_pow_times_q_pow(3, 4);
        assert_eq!(poly.eval(&p), &p.pow(3) * &q.pow(4));
    }

    #[test]
    fn display_form() {
        let f = RationalPoly::from_pairs(&[(0, 1), (7, 4), (-11, 4), (7, 2), (-5, 2), (1, 1)])
            .unwrap();
        assert_eq!(f.to_string(), "7/4 p - 11/4 p^2 + 7/2 p^3 - 5/2 p^4 + p^5");
        assert_eq!(RationalPoly::zero().to_string(), "0");
        assert_eq!(
            RationalPoly::from_pairs(&[(-1, 2), (1, 1)]).unwrap().to_string(),
            "-1/2 + p"
        );
    }

    #[test]
    fn json_is_plain_array() {
        let p = RationalPoly::from_pairs(&[(0, 1), (3, 2)]).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"[{"num":"0","den":"1"},{"num":"3","den":"2"}]"#
        );
        let back: RationalPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
