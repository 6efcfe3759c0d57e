//! Quantitative facts behind the small-p regime: the level-1 approximation
//! of phi, the gap delta_n by which majority wins the level-1 weight, the
//! threshold p0(n) below which that gap forces strict optimality, and the
//! p >= 1/2 regime where dictators take over. Every verdict here is decided
//! in exact arithmetic; square roots only ever appear squared or replaced
//! by certified rational over-approximations.

use num::bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::boolfn::BooleanFunction;
use crate::erasure::{
    self, check_probability_open, level1_sum_abs, phi_poly, FixedPScorer, LevelScratch,
};
use crate::error::{Error, Result};
use crate::fnspec::FunctionSpec;
use crate::rational::{rat, Rational};
use crate::search::enumerate_odd;

/// |phi_p(f) - p * sum_i |fhat(i)|| together with the exact verdict on the
/// quadratic bound ((n-1) sqrt(n) + C(n,2)) p^2.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Lemma1Certificate {
    pub spec: String,
    pub n: u32,
    pub p: Rational,
    pub phi: Rational,
    pub level1_sum: Rational,
    pub residual: Rational,
    pub bound_holds: bool,
}

pub fn lemma1_check(f: &BooleanFunction, p: &Rational) -> Result<Lemma1Certificate> {
    if !f.is_unbiased() {
        return Err(Error::BiasedFunction);
    }
    check_probability_open(p)?;
    let n = f.n();
    let phi = phi_poly(f).eval(p);
    let level1 = level1_sum_abs(f);
    let residual = (&phi - &(p * &level1)).abs();
    let p2 = p.pow(2);
    // bound: residual <= C(n,2) p^2 + (n-1) sqrt(n) p^2, decided by moving
    // the rational part across and squaring the rest
    let choose2 = Rational::from_int((n as i64) * (n as i64 - 1) / 2);
    let r_prime = &residual - &(&choose2 * &p2);
    let bound_holds = if r_prime <= Rational::zero() {
        true
    } else {
        let lhs = r_prime.pow(2);
        let rhs = Rational::from_int((n as i64 - 1) * (n as i64 - 1) * n as i64) * p2.pow(2);
        lhs <= rhs
    };
    Ok(Lemma1Certificate {
        spec: FunctionSpec::from_function(f).to_string(),
        n,
        p: p.clone(),
        phi,
        level1_sum: level1,
        residual,
        bound_holds,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScanStrategy {
    /// Enumerate every Boolean function on n bits. Cheap for n <= 3; for
    /// n = 5 this walks all 2^32 tables with bit-parallel scoring.
    Full,
    /// The direct argument: sgn(sum x_i) maximizes the correlation with
    /// sum x_i pointwise, and flipping any point x costs exactly
    /// 2^(1-n) |sum x_i|.
    Pointwise,
}

/// Cap on how many runner-up tables a scan materializes in its report.
pub const RUNNER_UP_CAP: usize = 32;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GapReport {
    pub n: u32,
    pub method: String,
    /// max over all f of sum_i fhat(i)
    pub max_level1_sum: Rational,
    pub delta_n: Rational,
    pub argmax_spec: String,
    /// second-place functions, capped at [`RUNNER_UP_CAP`]
    pub runner_up_specs: Vec<String>,
    pub runner_up_count: u64,
    pub scanned: u64,
}

/// s(x) = sum_i x_i at point index x.
fn coordinate_sums(n: u32) -> Vec<i32> {
    (0..1usize << n)
        .map(|x| n as i32 - 2 * (x as u32).count_ones() as i32)
        .collect()
}

/// Maximizes sum_i fhat(i) = E[f(x) sum_i x_i] and reports the gap to
/// second place. Majority is the unique maximizer for odd n; the scan
/// proves it for n <= 3 by brute force and n = 5 behind [`ScanStrategy::Full`].
pub fn level1_argmax_scan(n: u32, strategy: ScanStrategy) -> Result<GapReport> {
    if n % 2 == 0 {
        return Err(Error::EvenDimension {
            n,
            what: "level-1 gap scan",
        });
    }
    match strategy {
        ScanStrategy::Pointwise => Ok(scan_pointwise(n)),
        ScanStrategy::Full if n <= 3 => Ok(scan_full_small(n)),
        ScanStrategy::Full if n == 5 => Ok(scan_full_n5()),
        ScanStrategy::Full => Err(Error::DimensionTooLarge {
            n,
            max: 5,
            what: "the full 2^(2^n) level-1 scan",
        }),
    }
}

fn table_spec(n: u32, table: &[i8]) -> String {
    let f = BooleanFunction::new(n, table.to_vec()).expect("scan tables are valid");
    FunctionSpec::from_function(&f).to_string()
}

fn scan_pointwise(n: u32) -> GapReport {
    let s = coordinate_sums(n);
    let len = s.len();
    let total_abs: i64 = s.iter().map(|&v| v.unsigned_abs() as i64).sum();
    let two_n = BigInt::from(1) << n;
    let maj = BooleanFunction::majority(n).expect("n odd");

    // flipping point x moves the correlation by 2 |s(x)|; the cheapest
    // flips are the points with |s(x)| = 1
    let mut runner_up_specs = Vec::new();
    let mut runner_up_count = 0u64;
    for x in 0..len {
        if s[x].abs() == 1 {
            runner_up_count += 1;
            if runner_up_specs.len() < RUNNER_UP_CAP {
                let mut table = maj.table().to_vec();
                table[x] = -table[x];
                runner_up_specs.push(table_spec(n, &table));
            }
        }
    }
    GapReport {
        n,
        method: "pointwise".to_string(),
        max_level1_sum: Rational::new(total_abs.into(), two_n.clone()).expect("2^n"),
        delta_n: Rational::new(2.into(), two_n).expect("2^n"),
        argmax_spec: FunctionSpec::Majority { n }.to_string(),
        runner_up_specs,
        runner_up_count,
        scanned: len as u64,
    }
}

fn scan_full_small(n: u32) -> GapReport {
    let s = coordinate_sums(n);
    let len = s.len();
    let mut best = i64::MIN;
    let mut best_masks: Vec<usize> = Vec::new();
    let mut best_count = 0u64;
    let mut second = i64::MIN;
    let mut second_masks: Vec<usize> = Vec::new();
    let mut second_count = 0u64;
    for mask in 0..1usize << len {
        let score: i64 = (0..len)
            .map(|x| if mask >> x & 1 == 1 { -s[x] as i64 } else { s[x] as i64 })
            .sum();
        if score > best {
            second = best;
            second_masks = std::mem::take(&mut best_masks);
            second_count = best_count;
            best = score;
            best_masks = vec![mask];
            best_count = 1;
        } else if score == best {
            best_count += 1;
            if best_masks.len() < RUNNER_UP_CAP {
                best_masks.push(mask);
            }
        } else if score > second {
            second = score;
            second_masks = vec![mask];
            second_count = 1;
        } else if score == second {
            second_count += 1;
            if second_masks.len() < RUNNER_UP_CAP {
                second_masks.push(mask);
            }
        }
    }
    assert_eq!(best_count, 1, "level-1 argmax must be unique for odd n");
    let best_mask = best_masks[0];

    let table_of = |mask: usize| -> Vec<i8> {
        (0..len).map(|x| if mask >> x & 1 == 1 { -1 } else { 1 }).collect()
    };
    let two_n = BigInt::from(1) << n;
    GapReport {
        n,
        method: "full_scan".to_string(),
        max_level1_sum: Rational::new(best.into(), two_n.clone()).expect("2^n"),
        delta_n: Rational::new((best - second).into(), two_n).expect("2^n"),
        argmax_spec: table_spec(n, &table_of(best_mask)),
        runner_up_specs: second_masks
            .iter()
            .map(|&m| table_spec(n, &table_of(m)))
            .collect(),
        runner_up_count: second_count,
        scanned: 1 << len,
    }
}

/// Full scan at n = 5: 2^32 truth tables. score(mask) = -2 T(mask) where
/// T is the sum of s(x) over the -1 points, so minimizing T maximizes the
/// correlation. T for the low 16 index bits is table-driven; blocks over
/// the high 16 bits run in parallel and merge in ascending order.
fn scan_full_n5() -> GapReport {
    let s = coordinate_sums(5);
    let lo_sums: Vec<i32> = (0..1usize << 16)
        .map(|bits| (0..16).filter(|&x| bits >> x & 1 == 1).map(|x| s[x]).sum())
        .collect();
    let hi_sums: Vec<i32> = (0..1usize << 16)
        .map(|bits| (0..16).filter(|&x| bits >> x & 1 == 1).map(|x| s[x + 16]).sum())
        .collect();

    #[derive(Clone)]
    struct Block {
        best: i32,
        best_masks: Vec<u32>,
        best_count: u64,
        second: i32,
        second_masks: Vec<u32>,
        second_count: u64,
    }

    let merge_value = |acc: &mut Block, value: i32, mask_base: u32, lo: u32| {
        let mask = mask_base | lo;
        if value < acc.best {
            acc.second = acc.best;
            acc.second_masks = std::mem::take(&mut acc.best_masks);
            acc.second_count = acc.best_count;
            acc.best = value;
            acc.best_masks = vec![mask];
            acc.best_count = 1;
        } else if value == acc.best {
            acc.best_count += 1;
            if acc.best_masks.len() < RUNNER_UP_CAP {
                acc.best_masks.push(mask);
            }
        } else if value < acc.second {
            acc.second = value;
            acc.second_masks = vec![mask];
            acc.second_count = 1;
        } else if value == acc.second {
            acc.second_count += 1;
            if acc.second_masks.len() < RUNNER_UP_CAP {
                acc.second_masks.push(mask);
            }
        }
    };

    let blocks: Vec<Block> = (0..1u32 << 16)
        .into_par_iter()
        .map(|hi| {
            let base = hi_sums[hi as usize];
            let mut acc = Block {
                best: i32::MAX,
                best_masks: Vec::new(),
                best_count: 0,
                second: i32::MAX,
                second_masks: Vec::new(),
                second_count: 0,
            };
            let mask_base = hi << 16;
            for (lo, &ls) in lo_sums.iter().enumerate() {
                merge_value(&mut acc, base + ls, mask_base, lo as u32);
            }
            acc
        })
        .collect();

    let mut total = Block {
        best: i32::MAX,
        best_masks: Vec::new(),
        best_count: 0,
        second: i32::MAX,
        second_masks: Vec::new(),
        second_count: 0,
    };
    for b in blocks {
        for (value, masks, count) in [
            (b.best, b.best_masks, b.best_count),
            (b.second, b.second_masks, b.second_count),
        ] {
            if value == i32::MAX {
                continue;
            }
            // merge preserving counts; mask lists stay ascending because
            // blocks arrive in ascending high-bit order
            if value < total.best {
                total.second = total.best;
                total.second_masks = std::mem::take(&mut total.best_masks);
                total.second_count = total.best_count;
                total.best = value;
                total.best_masks = masks;
                total.best_count = count;
            } else if value == total.best {
                total.best_count += count;
                for m in masks {
                    if total.best_masks.len() < RUNNER_UP_CAP {
                        total.best_masks.push(m);
                    }
                }
            } else if value < total.second {
                total.second = value;
                total.second_masks = masks;
                total.second_count = count;
            } else if value == total.second {
                total.second_count += count;
                for m in masks {
                    if total.second_masks.len() < RUNNER_UP_CAP {
                        total.second_masks.push(m);
                    }
                }
            }
        }
    }

    assert_eq!(total.best_count, 1, "level-1 argmax must be unique");
    let best_score = -2 * total.best as i64;
    let second_score = -2 * total.second as i64;
    let table_of = |mask: u32| -> Vec<i8> {
        (0..32).map(|x| if mask >> x & 1 == 1 { -1 } else { 1 }).collect()
    };
    let two_n = BigInt::from(32);
    GapReport {
        n: 5,
        method: "full_scan".to_string(),
        max_level1_sum: Rational::new(best_score.into(), two_n.clone()).expect("2^n"),
        delta_n: Rational::new((best_score - second_score).into(), two_n).expect("2^n"),
        argmax_spec: table_spec(5, &table_of(total.best_masks[0])),
        runner_up_specs: total
            .second_masks
            .iter()
            .map(|&m| table_spec(5, &table_of(m)))
            .collect(),
        runner_up_count: total.second_count,
        scanned: 1u64 << 32,
    }
}

/// Smallest integer r with r^2 >= v.
fn ceil_sqrt_u64(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while r * r < v {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= v {
        r -= 1;
    }
    r
}

/// Rational s >= sqrt(n) with s - sqrt(n) < 10^-6.
fn sqrt_over_approx(n: u32) -> Rational {
    let scaled = n as u64 * 1_000_000_000_000;
    let r = ceil_sqrt_u64(scaled);
    rat(r as i64, 1_000_000)
}

/// The threshold p0(n) = min(delta_n / (4 C_n), 1) with
/// C_n = (n-1) sqrt(n) + C(n,2). sqrt(n) is over-approximated, which only
/// shrinks the threshold, so every p below the returned value is safe.
pub fn p0_bound(n: u32) -> Result<Rational> {
    if n % 2 == 0 {
        return Err(Error::EvenDimension {
            n,
            what: "the small-p threshold",
        });
    }
    if n == 1 {
        // C_1 = 0: no quadratic error term, the bound degenerates
        return Ok(Rational::one());
    }
    let delta = Rational::new(2.into(), BigInt::from(1) << n).expect("2^n");
    let c_n = Rational::from_int(n as i64 - 1) * sqrt_over_approx(n)
        + Rational::from_int((n as i64) * (n as i64 - 1) / 2);
    let p0 = delta / (Rational::from_int(4) * c_n);
    Ok(p0.min(Rational::one()))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SmallPReport {
    pub n: u32,
    pub p0: Rational,
    pub samples: Vec<Rational>,
    /// odd functions compared against majority, per sample
    pub competitors: u64,
    /// size of the +-Maj-up-to-flips class that is exempt
    pub majority_class_size: u64,
    pub all_strict: bool,
    pub min_margin: Rational,
    pub min_margin_spec: String,
    pub min_margin_p: Rational,
}

/// Signed flip class of majority: every (sigma, +-1) image of Maj_n. For
/// odd functions output negation coincides with flipping all inputs, so
/// the class has exactly 2^n members.
fn majority_flip_class(n: u32) -> HashSet<Vec<u8>> {
    let maj = BooleanFunction::majority(n).expect("n odd");
    let len = maj.num_points();
    let mut class = HashSet::new();
    for sigma in 0..len {
        let flipped: Vec<i8> = (0..len).map(|x| maj.value(x ^ sigma)).collect();
        let f = BooleanFunction::new(n, flipped.clone()).expect("valid");
        class.insert(f.packed_bits());
        class.insert(f.negated().packed_bits());
    }
    class
}

/// Checks that majority strictly beats every other odd function at each
/// sampled p. Samples must lie strictly below [`p0_bound`]; the class of
/// +-Maj up to flips is exempt (those tie exactly) and is verified to tie.
pub fn verify_small_p_optimality(n: u32, samples: &[Rational]) -> Result<SmallPReport> {
    let p0 = p0_bound(n)?;
    if samples.is_empty() {
        return Err(Error::NoSamples);
    }
    for p in samples {
        check_probability_open(p)?;
        if *p >= p0 {
            return Err(Error::SampleAboveThreshold {
                sample: p.to_string(),
                p0: p0.to_string(),
            });
        }
    }
    let class = majority_flip_class(n);
    let maj = BooleanFunction::majority(n)?;

    let mut all_strict = true;
    let mut competitors = 0u64;
    let mut min_margin: Option<(Rational, String, Rational)> = None;
    for p in samples {
        let scorer = FixedPScorer::new(n, p)?;
        let mut wht = Vec::new();
        let mut scratch = LevelScratch::new(n);
        let maj_score = scorer.score_big(maj.table(), &mut wht, &mut scratch);
        let mut sample_competitors = 0u64;
        for f in enumerate_odd(n)? {
            let score = scorer.score_big(f.table(), &mut wht, &mut scratch);
            if class.contains(&f.packed_bits()) {
                assert_eq!(score, maj_score, "flip-class members must tie majority");
                continue;
            }
            sample_competitors += 1;
            if score >= maj_score {
                all_strict = false;
            }
            let margin = scorer.to_rational(&maj_score - &score);
            let better = match &min_margin {
                None => true,
                Some((m, _, _)) => margin < *m,
            };
            if better {
                let spec = FunctionSpec::from_function(&f).to_string();
                min_margin = Some((margin, spec, p.clone()));
            }
        }
        competitors = sample_competitors;
    }
    // n = 1 leaves nothing outside the class to compare against
    let (min_margin, min_margin_spec, min_margin_p) = min_margin.ok_or(Error::EmptyFamily)?;
    Ok(SmallPReport {
        n,
        p0,
        samples: samples.to_vec(),
        competitors,
        majority_class_size: class.len() as u64,
        all_strict,
        min_margin,
        min_margin_spec,
        min_margin_p,
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DictatorReport {
    pub n: u32,
    pub p: Rational,
    pub max_phi: Rational,
    pub argmax_specs: Vec<String>,
    pub argmax_count: u64,
    pub dictators_attain: bool,
}

/// For p >= 1/2, the maximum of phi over odd functions is p, attained by
/// the signed dictators (other functions may tie at p = 1/2 exactly).
pub fn dictator_regime_check(n: u32, p: &Rational) -> Result<DictatorReport> {
    if n % 2 == 0 {
        return Err(Error::EvenDimension {
            n,
            what: "the dictator regime check",
        });
    }
    if n > 3 {
        return Err(Error::DimensionTooLarge {
            n,
            max: 3,
            what: "the dictator regime check",
        });
    }
    if *p < rat(1, 2) || *p >= Rational::one() {
        return Err(Error::InvalidProbability {
            p: p.to_string(),
            need: "1/2 <= p < 1",
        });
    }
    let scorer = FixedPScorer::new(n, p)?;
    let mut wht = Vec::new();
    let mut scratch = LevelScratch::new(n);
    let mut best: Option<BigInt> = None;
    let mut argmax: Vec<BooleanFunction> = Vec::new();
    for f in enumerate_odd(n)? {
        let score = scorer.score_big(f.table(), &mut wht, &mut scratch);
        match &best {
            Some(b) if score < *b => {}
            Some(b) if score == *b => argmax.push(f),
            _ => {
                best = Some(score);
                argmax = vec![f];
            }
        }
    }
    let max_phi = scorer.to_rational(best.expect("odd family is never empty"));

    let mut dictator_tables = Vec::new();
    for i in 1..=n {
        let d = BooleanFunction::dictator(i, n)?;
        dictator_tables.push(d.negated().packed_bits());
        dictator_tables.push(d.packed_bits());
    }
    let argmax_packed: HashSet<Vec<u8>> = argmax.iter().map(|f| f.packed_bits()).collect();
    let dictators_attain =
        max_phi == *p && dictator_tables.iter().all(|t| argmax_packed.contains(t));

    Ok(DictatorReport {
        n,
        p: p.clone(),
        max_phi,
        argmax_count: argmax.len() as u64,
        argmax_specs: argmax
            .iter()
            .map(|f| FunctionSpec::from_function(f).to_string())
            .collect(),
        dictators_attain,
    })
}

/// The level-1 contribution inside phi_poly: the support-size-1 term of
/// the expansion equals p (1-p)^(n-1) sum_i |fhat(i)| exactly.
pub fn phi_level1_term(f: &BooleanFunction) -> Rational {
    let w = crate::fourier::FourierExpansion::from_function(f);
    let sums = erasure::abs_level_sums(w.scaled(), f.n());
    Rational::new(sums[1].into(), BigInt::from(1) << (f.n() + 1)).expect("2^(n+1)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::LtfSpec;
    use crate::erasure::phi_at;

    fn counterexample() -> BooleanFunction {
        BooleanFunction::from_ltf(&LtfSpec::new(vec![1, -3, 1, -1, 3]).unwrap()).unwrap()
    }

    #[test]
    fn lemma1_majority5_residual() {
        let cert = lemma1_check(&BooleanFunction::majority(5).unwrap(), &rat(2, 5)).unwrap();
        assert_eq!(cert.phi, rat(5363, 12500));
        assert_eq!(cert.level1_sum, rat(15, 8));
        // |5363/12500 - 3/4| = 4012/12500 = 1003/3125
        assert_eq!(cert.residual, rat(1003, 3125));
        assert!(cert.bound_holds);
    }

    #[test]
    fn lemma1_dictator_is_tight_at_zero() {
        let cert = lemma1_check(&BooleanFunction::dictator(1, 4).unwrap(), &rat(3, 7)).unwrap();
        assert!(cert.residual.is_zero());
        assert!(cert.bound_holds);
    }

    #[test]
    fn lemma1_counterexample() {
        let cert = lemma1_check(&counterexample(), &rat(2, 5)).unwrap();
        assert_eq!(cert.residual, (&rat(2689, 6250) - &(&rat(2, 5) * &rat(7, 4))).abs());
        assert!(cert.bound_holds);
    }

    #[test]
    fn lemma1_rejects_biased_and_bad_p() {
        let c = BooleanFunction::constant(3, 1).unwrap();
        assert!(matches!(
            lemma1_check(&c, &rat(1, 2)),
            Err(Error::BiasedFunction)
        ));
        let maj = BooleanFunction::majority(3).unwrap();
        assert!(lemma1_check(&maj, &Rational::zero()).is_err());
        assert!(lemma1_check(&maj, &Rational::one()).is_err());
    }

    #[test]
    fn level1_term_identity() {
        // the k=1 slice of the phi expansion is p q^(n-1) sum_i |fhat(i)|
        for f in [
            BooleanFunction::majority(5).unwrap(),
            counterexample(),
            BooleanFunction::dictator(2, 5).unwrap(),
        ] {
            assert_eq!(phi_level1_term(&f), level1_sum_abs(&f));
        }
    }

    #[test]
    fn gap_scan_n3_full() {
        let report = level1_argmax_scan(3, ScanStrategy::Full).unwrap();
        assert_eq!(report.scanned, 256);
        assert_eq!(report.max_level1_sum, rat(3, 2));
        assert_eq!(report.delta_n, rat(1, 4));
        assert_eq!(
            report.argmax_spec,
            FunctionSpec::from_function(&BooleanFunction::majority(3).unwrap()).to_string()
        );
        assert_eq!(report.runner_up_count, 6);
        assert_eq!(report.runner_up_specs.len(), 6);
        // runner-ups are single flips of majority at points with |s(x)| = 1
        let maj = BooleanFunction::majority(3).unwrap();
        for spec in &report.runner_up_specs {
            let f = FunctionSpec::parse(spec).unwrap().to_function().unwrap();
            let diffs: Vec<usize> = (0..8).filter(|&x| f.value(x) != maj.value(x)).collect();
            assert_eq!(diffs.len(), 1);
            let s = 3 - 2 * (diffs[0] as i32).count_ones() as i32;
            assert_eq!(s.abs(), 1);
        }
    }

    #[test]
    fn gap_scan_n1_full() {
        let report = level1_argmax_scan(1, ScanStrategy::Full).unwrap();
        assert_eq!(report.max_level1_sum, Rational::one());
        assert_eq!(report.delta_n, Rational::one());
        // runner-ups are the two constants
        assert_eq!(report.runner_up_count, 2);
    }

    #[test]
    fn gap_scan_pointwise() {
        let r5 = level1_argmax_scan(5, ScanStrategy::Pointwise).unwrap();
        assert_eq!(r5.delta_n, rat(1, 16));
        assert_eq!(r5.max_level1_sum, rat(15, 8));
        assert_eq!(r5.argmax_spec, "maj:5");
        assert_eq!(r5.runner_up_count, 20);
        let r3 = level1_argmax_scan(3, ScanStrategy::Pointwise).unwrap();
        assert_eq!(r3.delta_n, rat(1, 4));
        assert_eq!(r3.max_level1_sum, rat(3, 2));
        assert_eq!(r3.runner_up_count, 6);
        // pointwise and full brute force agree where both run
        let full = level1_argmax_scan(3, ScanStrategy::Full).unwrap();
        assert_eq!(full.delta_n, r3.delta_n);
        assert_eq!(full.max_level1_sum, r3.max_level1_sum);
        assert_eq!(full.runner_up_count, r3.runner_up_count);
        assert!(level1_argmax_scan(4, ScanStrategy::Pointwise).is_err());
        assert!(level1_argmax_scan(7, ScanStrategy::Full).is_err());
    }

    #[test]
    fn sqrt_over_approximation_certified() {
        for n in [2u32, 3, 5, 7, 10, 24] {
            let s = sqrt_over_approx(n);
            // s^2 >= n
            assert!(s.pow(2) >= Rational::from_int(n as i64), "n={n}");
            // (s - 10^-6)^2 < n
            let under = &s - &rat(1, 1_000_000);
            assert!(under.pow(2) < Rational::from_int(n as i64), "n={n}");
        }
        assert_eq!(sqrt_over_approx(5), rat(2_236_068, 1_000_000));
        assert_eq!(sqrt_over_approx(3), rat(1_732_051, 1_000_000));
    }

    #[test]
    fn p0_values() {
        assert_eq!(p0_bound(1).unwrap(), Rational::one());
        // n=3: delta/4C = (1/4) / (4 (2 sqrt(3) + 3))
        let p3 = p0_bound(3).unwrap();
        let c3 = Rational::from_int(2) * rat(1_732_051, 1_000_000) + Rational::from_int(3);
        assert_eq!(p3, rat(1, 4) / (Rational::from_int(4) * c3));
        assert_eq!(p3, rat(31250, 3_232_051));
        // n=5
        let p5 = p0_bound(5).unwrap();
        assert_eq!(p5, rat(15625, 18_944_272));
        // sanity: spec's example sample sits below, 1/100 sits above for n=3
        assert!(rat(1, 1000) < p3);
        assert!(rat(1, 100) > p3);
        assert!(rat(1, 2000) < p5);
        assert!(p0_bound(2).is_err());
    }

    #[test]
    fn small_p_n3() {
        let report = verify_small_p_optimality(3, &[rat(1, 1000), rat(1, 200)]).unwrap();
        assert!(report.all_strict);
        assert_eq!(report.majority_class_size, 8);
        // 16 odd functions minus the 8-member class
        assert_eq!(report.competitors, 8);
        assert!(report.min_margin > Rational::zero());
        // margin witnesses an actual phi difference
        let f = FunctionSpec::parse(&report.min_margin_spec)
            .unwrap()
            .to_function()
            .unwrap();
        let maj = BooleanFunction::majority(3).unwrap();
        let got = &phi_at(&maj, &report.min_margin_p).unwrap()
            - &phi_at(&f, &report.min_margin_p).unwrap();
        assert_eq!(got, report.min_margin);
    }

    #[test]
    fn small_p_rejects_large_samples() {
        assert!(matches!(
            verify_small_p_optimality(3, &[rat(1, 100)]),
            Err(Error::SampleAboveThreshold { .. })
        ));
        assert!(matches!(
            verify_small_p_optimality(3, &[]),
            Err(Error::NoSamples)
        ));
        assert!(verify_small_p_optimality(3, &[Rational::zero()]).is_err());
    }

    #[test]
    fn dictator_regime_n3() {
        let r = dictator_regime_check(3, &rat(1, 2)).unwrap();
        assert_eq!(r.max_phi, rat(1, 2));
        assert!(r.dictators_attain);
        // majority ties the dictators at exactly 1/2
        assert!(r.argmax_count > 6);

        let r = dictator_regime_check(3, &rat(3, 4)).unwrap();
        assert_eq!(r.max_phi, rat(3, 4));
        assert!(r.dictators_attain);
        assert_eq!(r.argmax_count, 6);

        let r1 = dictator_regime_check(1, &rat(2, 3)).unwrap();
        assert_eq!(r1.max_phi, rat(2, 3));
        assert!(r1.dictators_attain);
        assert_eq!(r1.argmax_count, 2);

        assert!(dictator_regime_check(3, &rat(1, 3)).is_err());
        assert!(dictator_regime_check(3, &Rational::one()).is_err());
        assert!(dictator_regime_check(5, &rat(1, 2)).is_err());
    }
}
