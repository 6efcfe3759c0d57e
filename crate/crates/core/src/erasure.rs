//! The erasure model and the functional phi_p(f) = E|f(z)|.
//!
//! A random input z keeps each coordinate with probability p (uniformly
//! +-1) and erases it to 0 otherwise. Conditioned on the kept set S, f(z)
//! is the multilinear extension restricted to S, so
//!
//!   phi_p(f) = sum_S p^|S| (1-p)^(n-|S|) E_sigma |f_S(sigma)|
//!
//! with f_S the restriction to signs sigma on S. Everything here is exact.
//! Two routes are implemented on purpose: [`phi_poly`] goes through the
//! Fourier expansion and per-support transforms, [`phi_at`] averages truth
//! tables directly and never touches Fourier coefficients. They must agree
//! everywhere, and tests lean on that.

use std::cmp::Ordering;

use num::bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::fnspec::FunctionSpec;
use crate::fourier::{fwht_i64, FourierExpansion};
use crate::poly::{p_pow_times_q_pow, RationalPoly};
use crate::rational::Rational;

/// Dimension plus erasure rate; the distribution of z.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ErasureModel {
    n: u32,
    p: Rational,
}

impl ErasureModel {
    pub fn new(n: u32, p: Rational) -> Result<Self> {
        check_probability(&p)?;
        Ok(ErasureModel { n, p })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    /// Probability that the kept set is one fixed k-subset.
    pub fn support_weight(&self, k: u32) -> Rational {
        let q = Rational::one() - self.p.clone();
        self.p.pow(k) * q.pow(self.n - k)
    }
}

pub(crate) fn check_probability(p: &Rational) -> Result<()> {
    if p.is_negative() || *p > Rational::one() {
        return Err(Error::InvalidProbability {
            p: p.to_string(),
            need: "0 <= p <= 1",
        });
    }
    Ok(())
}

pub(crate) fn check_probability_open(p: &Rational) -> Result<()> {
    if *p <= Rational::zero() || *p >= Rational::one() {
        return Err(Error::InvalidProbability {
            p: p.to_string(),
            need: "0 < p < 1",
        });
    }
    Ok(())
}

/// Reusable buffers for [`abs_level_sums_into`]; the search scorer calls it
/// once per candidate and must not allocate each time.
pub(crate) struct LevelScratch {
    positions: Vec<u32>,
    sub: Vec<i64>,
    pub(crate) out: Vec<i128>,
}

impl LevelScratch {
    pub(crate) fn new(n: u32) -> Self {
        LevelScratch {
            positions: Vec::with_capacity(n as usize),
            sub: vec![0; 1 << n],
            out: vec![0; n as usize + 1],
        }
    }
}

/// For each level k, the sum over k-subsets S of
/// sum_sigma |sum_{T subseteq S} w[T] sigma^T|, where w is the 2^n-scaled
/// Fourier expansion. Dividing level k by 2^(n+k) turns it into
/// sum_{|S|=k} E_sigma |f_S(sigma)|.
pub(crate) fn abs_level_sums_into(w: &[i64], n: u32, scratch: &mut LevelScratch) {
    scratch.out.iter_mut().for_each(|c| *c = 0);
    for s in 0..w.len() {
        let positions = &mut scratch.positions;
        positions.clear();
        let mut m = s;
        while m != 0 {
            positions.push(m.trailing_zeros());
            m &= m - 1;
        }
        let k = positions.len();
        let size = 1usize << k;
        let sub = &mut scratch.sub[..size];
        for (ci, slot) in sub.iter_mut().enumerate() {
            let mut t = 0usize;
            for (j, &b) in positions.iter().enumerate() {
                t |= ((ci >> j) & 1) << b;
            }
            *slot = w[t];
        }
        fwht_i64(sub);
        scratch.out[k] += sub.iter().map(|&v| (v as i128).unsigned_abs() as i128).sum::<i128>();
    }
    debug_assert_eq!(n as usize + 1, scratch.out.len());
}

pub(crate) fn abs_level_sums(w: &[i64], n: u32) -> Vec<i128> {
    let mut scratch = LevelScratch::new(n);
    abs_level_sums_into(w, n, &mut scratch);
    scratch.out
}

/// phi_p(f) as an exact polynomial in p of degree at most n.
pub fn phi_poly(f: &BooleanFunction) -> RationalPoly {
    let w = FourierExpansion::from_function(f);
    let n = f.n() as usize;
    let sums = abs_level_sums(w.scaled(), f.n());
    let mut total = RationalPoly::zero();
    for (k, &c) in sums.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let coeff = Rational::new(BigInt::from(c), BigInt::from(1) << (n + k))
            .expect("power of two denominator");
        total = &total + &p_pow_times_q_pow(k, n - k).scale(&coeff);
    }
    total
}

/// phi_p(f) at one rational p, by direct truth-table averaging: for every
/// kept set and sign assignment, the restricted value is the plain average
/// of f over the matching inputs. Runs in O(4^n); it is the reference
/// implementation that [`phi_poly`] is checked against.
pub fn phi_at(f: &BooleanFunction, p: &Rational) -> Result<Rational> {
    check_probability(p)?;
    Ok(restriction_scan(f, p, |sum| i128::from(sum).unsigned_abs() as i128, 1))
}

/// Stab_p(f) = E[f(z)^2] at one rational p, same truth-table route as
/// [`phi_at`] with the restricted value squared.
pub fn stab_via_erasure(f: &BooleanFunction, p: &Rational) -> Result<Rational> {
    check_probability(p)?;
    Ok(restriction_scan(f, p, |sum| i128::from(sum) * i128::from(sum), 2))
}

/// Shared inner loop: accumulates, per kept set S, the weight
/// p^|S| q^(n-|S|) times sum_sigma g(R(sigma)) / (2^|S| * (2^(n-|S|))^deg),
/// where R(sigma) is the integer sum of f over inputs extending sigma.
fn restriction_scan(
    f: &BooleanFunction,
    p: &Rational,
    g: impl Fn(i64) -> i128,
    deg: u32,
) -> Rational {
    let n = f.n() as usize;
    let len = f.num_points();
    let q = Rational::one() - p.clone();
    let p_pows: Vec<Rational> = (0..=n as u32).map(|k| p.pow(k)).collect();
    let q_pows: Vec<Rational> = (0..=n as u32).map(|k| q.pow(k)).collect();

    let mut positions = Vec::with_capacity(n);
    let mut co_positions = Vec::with_capacity(n);
    let mut total = Rational::zero();
    for s in 0..len {
        positions.clear();
        co_positions.clear();
        for b in 0..n as u32 {
            if s >> b & 1 == 1 {
                positions.push(b);
            } else {
                co_positions.push(b);
            }
        }
        let k = positions.len();
        let mut acc: i128 = 0;
        for sigma in 0..1usize << k {
            let mut base = 0usize;
            for (j, &b) in positions.iter().enumerate() {
                base |= ((sigma >> j) & 1) << b;
            }
            let mut sum = 0i64;
            for rest in 0..1usize << (n - k) {
                let mut x = base;
                for (j, &b) in co_positions.iter().enumerate() {
                    x |= ((rest >> j) & 1) << b;
                }
                sum += f.value(x) as i64;
            }
            acc += g(sum);
        }
        if acc == 0 {
            continue;
        }
        // divide by 2^k sign patterns and the restriction normalizer
        let denom = BigInt::from(1) << (k as u32 + deg * (n - k) as u32);
        let weight = &p_pows[k] * &q_pows[n - k];
        total = total + weight * Rational::new(BigInt::from(acc), denom).expect("power of two");
    }
    total
}

/// Stab_p(f) as a polynomial: the level-k Fourier weight is the
/// coefficient of p^k.
pub fn stab_poly(f: &BooleanFunction) -> RationalPoly {
    let w = FourierExpansion::from_function(f);
    let n = f.n();
    let mut level_sums = vec![0i128; n as usize + 1];
    for (mask, &c) in w.scaled().iter().enumerate() {
        level_sums[mask.count_ones() as usize] += i128::from(c) * i128::from(c);
    }
    let four_n = BigInt::from(1) << (2 * n);
    RationalPoly::from_coeffs(
        level_sums
            .into_iter()
            .map(|c| Rational::new(BigInt::from(c), four_n.clone()).expect("4^n nonzero"))
            .collect(),
    )
}

/// Sum of |fhat({i})| over all coordinates.
pub fn level1_sum_abs(f: &BooleanFunction) -> Rational {
    let w = FourierExpansion::from_function(f);
    let total: i64 = (0..f.n())
        .map(|i| w.scaled()[1usize << i].abs())
        .sum();
    Rational::new(total.into(), BigInt::from(1) << f.n()).expect("2^n nonzero")
}

/// Exact comparison of phi_p(f) against phi_p(g) at one p. Returns the
/// ordering and the margin phi_p(f) - phi_p(g).
pub fn compare_phi(
    f: &BooleanFunction,
    g: &BooleanFunction,
    p: &Rational,
) -> Result<(Ordering, Rational)> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch {
            left: f.n(),
            right: g.n(),
        });
    }
    check_probability(p)?;
    let vf = phi_poly(f).eval(p);
    let vg = phi_poly(g).eval(p);
    let margin = &vf - &vg;
    Ok((vf.cmp(&vg), margin))
}

/// Fixed-p evaluator used by the exhaustive scans. phi values are compared
/// as integer numerators over the common denominator b^n 4^n (p = a/b), so
/// a scan never touches rational arithmetic in its hot loop. Falls back to
/// BigInt when the denominator overflows i128.
pub(crate) struct FixedPScorer {
    n: u32,
    weights_big: Vec<BigInt>,
    weights_i128: Option<Vec<i128>>,
    weights_f64: Vec<f64>,
    denom: BigInt,
}

impl FixedPScorer {
    pub(crate) fn new(n: u32, p: &Rational) -> Result<Self> {
        check_probability_open(p)?;
        let a = p.numer().clone();
        let b = p.denom().clone();
        let c = &b - &a;
        // W_k = a^k (b-a)^(n-k) 2^(n-k); score(f) = sum_k W_k C_k
        let weights_big: Vec<BigInt> = (0..=n)
            .map(|k| {
                num::pow::pow(a.clone(), k as usize)
                    * num::pow::pow(c.clone(), (n - k) as usize)
                    * (BigInt::from(1) << (n - k))
            })
            .collect();
        let denom = num::pow::pow(b, n as usize) * (BigInt::from(1) << (2 * n));
        let weights_i128 = if denom <= BigInt::from(i128::MAX) {
            Some(
                weights_big
                    .iter()
                    .map(|w| i128::try_from(w).expect("weights bounded by the denominator"))
                    .collect(),
            )
        } else {
            None
        };
        let pf = p.to_f64();
        let weights_f64: Vec<f64> = (0..=n)
            .map(|k| {
                pf.powi(k as i32) * (1.0 - pf).powi((n - k) as i32)
                    / 2f64.powi((n + k) as i32)
            })
            .collect();
        Ok(FixedPScorer {
            n,
            weights_big,
            weights_i128,
            weights_f64,
            denom,
        })
    }

    pub(crate) fn n(&self) -> u32 {
        self.n
    }

    pub(crate) fn has_fast_path(&self) -> bool {
        self.weights_i128.is_some()
    }

    /// Integer numerator of phi_p(f) over `denom`. Never overflows when the
    /// fast path is available: the total is phi * denom <= denom.
    pub(crate) fn score_i128(&self, table: &[i8], wht: &mut Vec<i64>, scratch: &mut LevelScratch) -> i128 {
        let weights = self.weights_i128.as_ref().expect("fast path checked by caller");
        crate::fourier::wht_scaled_into(table, wht);
        abs_level_sums_into(wht, self.n, scratch);
        scratch
            .out
            .iter()
            .zip(weights)
            .map(|(&c, &w)| c * w)
            .sum()
    }

    pub(crate) fn score_big(&self, table: &[i8], wht: &mut Vec<i64>, scratch: &mut LevelScratch) -> BigInt {
        crate::fourier::wht_scaled_into(table, wht);
        abs_level_sums_into(wht, self.n, scratch);
        scratch
            .out
            .iter()
            .zip(&self.weights_big)
            .map(|(&c, w)| BigInt::from(c) * w)
            .sum()
    }

    /// Float score for the prefilter; approximately phi_p(f).
    pub(crate) fn score_f64(&self, table: &[i8], wht: &mut Vec<i64>, scratch: &mut LevelScratch) -> f64 {
        crate::fourier::wht_scaled_into(table, wht);
        abs_level_sums_into(wht, self.n, scratch);
        scratch
            .out
            .iter()
            .zip(&self.weights_f64)
            .map(|(&c, &w)| c as f64 * w)
            .sum()
    }

    pub(crate) fn to_rational(&self, numerator: BigInt) -> Rational {
        Rational::new(numerator, self.denom.clone()).expect("denominator is positive")
    }
}

/// Everything about phi for one function, in one serializable bundle.
/// `decimal` renders the value at p: exact when it terminates, otherwise
/// 30 significant digits with `decimal_exact` false.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PhiReport {
    pub spec: String,
    pub n: u32,
    pub phi_poly: RationalPoly,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Rational>,
    #[serde(rename = "phi_at_p", skip_serializing_if = "Option::is_none")]
    pub value: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal_exact: Option<bool>,
}

pub const REPORT_DECIMAL_DIGITS: usize = 30;

pub fn phi_report(spec: &FunctionSpec, p: Option<&Rational>) -> Result<PhiReport> {
    let f = spec.to_function()?;
    if let Some(p) = p {
        check_probability(p)?;
    }
    let poly = phi_poly(&f);
    let value = p.map(|p| poly.eval(p));
    let rendered = value.as_ref().map(|v| v.decimal(REPORT_DECIMAL_DIGITS));
    Ok(PhiReport {
        spec: spec.to_string(),
        n: f.n(),
        phi_poly: poly,
        p: p.cloned(),
        value,
        decimal: rendered.as_ref().map(|(s, _)| s.clone()),
        decimal_exact: rendered.as_ref().map(|&(_, e)| e),
    })
}
