//! Candidate-family enumeration and exact argmax of phi at a fixed p.
//! Candidates are materialized up front (the families are small), scored in
//! index blocks by independent workers, and merged in ascending block order,
//! so the result is identical for any worker count. Floating point appears
//! only in the optional prefilter; the reported maximum and tie set always
//! come from exact re-scoring.

use num::bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use crate::boolfn::{BooleanFunction, LtfSpec};
use crate::erasure::{check_probability_open, phi_poly, FixedPScorer, LevelScratch};
use crate::error::{Error, Result};
use crate::fnspec::FunctionSpec;
use crate::rational::Rational;
use crate::symmetry::canonical_form;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FamilyKind {
    /// Every odd function on n bits. n <= 5; n = 7 is 2^64 candidates.
    OddAll,
    /// Threshold functions with weights in +-{1..max_weight}^n.
    LtfBounded { max_weight: i64 },
    /// An explicit list of function specs, all of dimension n.
    Explicit { specs: Vec<FunctionSpec> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CandidateFamily {
    pub kind: FamilyKind,
    pub n: u32,
    /// collapse the family and its argmax set to canonical forms
    pub dedupe: bool,
}

impl CandidateFamily {
    pub fn odd_all(n: u32, dedupe: bool) -> Self {
        CandidateFamily {
            kind: FamilyKind::OddAll,
            n,
            dedupe,
        }
    }

    pub fn ltf(n: u32, max_weight: i64, dedupe: bool) -> Self {
        CandidateFamily {
            kind: FamilyKind::LtfBounded { max_weight },
            n,
            dedupe,
        }
    }

    pub fn explicit(n: u32, specs: Vec<FunctionSpec>, dedupe: bool) -> Self {
        CandidateFamily {
            kind: FamilyKind::Explicit { specs },
            n,
            dedupe,
        }
    }

    /// Stable identity string; checkpoints are keyed by it.
    pub fn descriptor(&self) -> String {
        match &self.kind {
            FamilyKind::OddAll => format!("odd:n={}:dedupe={}", self.n, self.dedupe),
            FamilyKind::LtfBounded { max_weight } => {
                format!("ltf:n={}:w={}:dedupe={}", self.n, max_weight, self.dedupe)
            }
            FamilyKind::Explicit { specs } => {
                let joined: Vec<String> = specs.iter().map(|s| s.to_string()).collect();
                format!(
                    "explicit:n={}:k={}:dedupe={}:[{}]",
                    self.n,
                    specs.len(),
                    self.dedupe,
                    joined.join(";")
                )
            }
        }
    }
}

impl fmt::Display for CandidateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

/// Odd functions on n bits in increasing order of the free-half pattern.
/// Pattern bit j fixes the value at the j-th even index; the complementary
/// index takes the opposite sign, so f(-x) = -f(x) by construction.
pub struct OddFunctions {
    n: u32,
    next: u64,
    count: u64,
}

impl Iterator for OddFunctions {
    type Item = BooleanFunction;

    fn next(&mut self) -> Option<BooleanFunction> {
        if self.next == self.count {
            return None;
        }
        let f = odd_function(self.n, self.next);
        self.next += 1;
        Some(f)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.count - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for OddFunctions {}

fn odd_function(n: u32, m: u64) -> BooleanFunction {
    let len = 1usize << n;
    let full = len - 1;
    let mut table = vec![0i8; len];
    for j in 0..len / 2 {
        let v: i8 = if m >> j & 1 == 1 { -1 } else { 1 };
        table[2 * j] = v;
        table[2 * j ^ full] = -v;
    }
    BooleanFunction::new(n, table).expect("odd tables are valid")
}

pub fn enumerate_odd(n: u32) -> Result<OddFunctions> {
    if n % 2 == 0 {
        return Err(Error::EvenDimension {
            n,
            what: "odd-function enumeration",
        });
    }
    if n > 5 {
        return Err(Error::OddEnumTooLarge { n });
    }
    Ok(OddFunctions {
        n,
        next: 0,
        count: 1u64 << (1u32 << (n - 1)),
    })
}

/// Threshold functions with weights in +-{1..max_weight}^n, each distinct
/// function once. Raw mode walks sign-weight vectors in odometer order and
/// dedupes by truth table; canonical mode walks non-increasing all-positive
/// vectors (every sign or order change is an input symmetry) and yields
/// canonical forms.
pub fn enumerate_ltf(n: u32, max_weight: i64, dedupe: bool) -> Result<Vec<BooleanFunction>> {
    if max_weight < 1 {
        return Err(Error::InvalidWeightBound { got: max_weight });
    }
    if n == 0 || n > crate::boolfn::MAX_N {
        return Err(Error::DimensionTooLarge {
            n,
            max: crate::boolfn::MAX_N,
            what: "LTF enumeration",
        });
    }
    let mut out = Vec::new();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    if dedupe {
        let mut weights = vec![1i64; n as usize];
        loop {
            match table_of_weights(&weights) {
                Some(f) => {
                    let c = canonical_form(&f)?;
                    if seen.insert(c.packed_bits()) {
                        out.push(c);
                    }
                }
                None => {}
            }
            // next non-increasing vector: bump the rightmost position that
            // can grow without exceeding its left neighbor, reset the tail
            let mut pos = None;
            for i in (0..weights.len()).rev() {
                let cap = if i == 0 { max_weight } else { weights[i - 1] };
                if weights[i] < cap {
                    pos = Some(i);
                    break;
                }
            }
            match pos {
                Some(i) => {
                    weights[i] += 1;
                    for j in i + 1..weights.len() {
                        weights[j] = 1;
                    }
                }
                None => break,
            }
        }
    } else {
        let base = 2 * max_weight as u64;
        let total = base
            .checked_pow(n)
            .filter(|&t| t <= 1 << 24)
            .ok_or(Error::DimensionTooLarge {
                n,
                max: 24,
                what: "raw LTF enumeration (too many weight vectors)",
            })?;
        let mut weights = vec![0i64; n as usize];
        for i in 0..total {
            let mut rest = i;
            for w in weights.iter_mut().rev() {
                let d = (rest % base) as i64;
                rest /= base;
                *w = if d < max_weight {
                    d - max_weight
                } else {
                    d - max_weight + 1
                };
            }
            if let Some(f) = table_of_weights(&weights) {
                if seen.insert(f.packed_bits()) {
                    out.push(f);
                }
            }
        }
    }
    Ok(out)
}

/// None when the weight vector ties somewhere on the cube.
fn table_of_weights(weights: &[i64]) -> Option<BooleanFunction> {
    let spec = LtfSpec::new(weights.to_vec()).expect("nonzero weight vectors");
    match BooleanFunction::from_ltf(&spec) {
        Ok(f) => Some(f),
        Err(Error::LtfTie { .. }) => None,
        Err(e) => unreachable!("LTF table build can only fail on ties: {e}"),
    }
}

fn materialize_family(family: &CandidateFamily) -> Result<Vec<BooleanFunction>> {
    match &family.kind {
        FamilyKind::OddAll => Ok(enumerate_odd(family.n)?.collect()),
        FamilyKind::LtfBounded { max_weight } => {
            enumerate_ltf(family.n, *max_weight, family.dedupe)
        }
        FamilyKind::Explicit { specs } => {
            let mut out = Vec::new();
            let mut seen = HashSet::new();
            for spec in specs {
                let f = spec.to_function()?;
                if f.n() != family.n {
                    return Err(Error::DimensionMismatch {
                        left: family.n,
                        right: f.n(),
                    });
                }
                let f = if family.dedupe { canonical_form(&f)? } else { f };
                if seen.insert(f.packed_bits()) {
                    out.push(f);
                }
            }
            Ok(out)
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SearchReport {
    pub family: String,
    pub p: Rational,
    pub best_value: Rational,
    /// maximizer specs; canonical forms when the family dedupes
    pub argmax: Vec<String>,
    /// maximizers among scanned candidates, before canonical collapse
    pub argmax_count: u64,
    /// best_value - phi_p(Maj_n); absent for even n
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin_over_majority: Option<Rational>,
    pub candidates_scanned: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
    pub complete: bool,
}

impl SearchReport {
    /// Copy with the timing stripped; two runs of the same search compare
    /// equal on this.
    pub fn normalized(&self) -> SearchReport {
        SearchReport {
            wall_time_secs: None,
            ..self.clone()
        }
    }
}

/// Knobs for long scans. The defaults run the whole family in one call
/// with no progress output and no checkpointing.
#[derive(Default)]
pub struct ArgmaxOptions {
    /// shortlist by float score within 1e-6 of the float max, then re-score
    /// the shortlist exactly
    pub prefilter: bool,
    /// JSON-lines sink; one line per merged chunk
    pub progress: Option<Box<dyn Write>>,
    /// checkpoint file, written every `checkpoint_every_blocks`; exact-only
    /// scans resume from it (the prefilter pass is cheap enough to redo)
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every_blocks: u64,
    /// stop after this many blocks, leaving a resumable checkpoint and a
    /// report with complete = false
    pub limit_blocks: Option<u64>,
    /// candidates per worker block; 0 means the default of 1024
    pub block_size: u64,
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    family: String,
    p: String,
    block_size: u64,
    next_block: u64,
    scanned: u64,
    best: Option<String>,
    tie_indices: Vec<u64>,
}

pub fn argmax_phi(family: &CandidateFamily, p: &Rational, prefilter: bool) -> Result<SearchReport> {
    let mut options = ArgmaxOptions {
        prefilter,
        ..ArgmaxOptions::default()
    };
    argmax_phi_with(family, p, &mut options)
}

pub fn argmax_phi_with(
    family: &CandidateFamily,
    p: &Rational,
    options: &mut ArgmaxOptions,
) -> Result<SearchReport> {
    let start = Instant::now();
    check_probability_open(p)?;
    let tables = materialize_family(family)?;
    if tables.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let scorer = FixedPScorer::new(family.n, p)?;
    let block_size = if options.block_size == 0 { 1024 } else { options.block_size } as usize;
    let nblocks = tables.len().div_ceil(block_size) as u64;
    let chunk_blocks = if options.checkpoint_every_blocks == 0 {
        16
    } else {
        options.checkpoint_every_blocks
    };

    // the float pass shortlists candidates; None means scan everything
    let float_cutoff = if options.prefilter {
        let gmax = (0..nblocks)
            .into_par_iter()
            .map(|b| {
                let lo = b as usize * block_size;
                let hi = (lo + block_size).min(tables.len());
                let mut wht = Vec::new();
                let mut scratch = LevelScratch::new(family.n);
                let mut m = f64::NEG_INFINITY;
                for t in &tables[lo..hi] {
                    m = m.max(scorer.score_f64(t.table(), &mut wht, &mut scratch));
                }
                m
            })
            .reduce(|| f64::NEG_INFINITY, f64::max);
        Some(gmax - 1e-6)
    } else {
        None
    };

    let mut next_block = 0u64;
    let mut scanned = 0u64;
    let mut best: Option<BigInt> = None;
    let mut ties: Vec<u64> = Vec::new();

    // prefilter runs fresh every time; only exact full scans resume
    if float_cutoff.is_none() {
        if let Some(path) = &options.checkpoint {
            if path.exists() {
                let text = std::fs::read_to_string(path)?;
                let cp: Checkpoint = serde_json::from_str(&text)?;
                let mismatch = |reason: &str| Error::CheckpointMismatch {
                    reason: reason.to_string(),
                };
                if cp.family != family.descriptor() {
                    return Err(mismatch("family descriptor differs"));
                }
                if cp.p != p.to_string() {
                    return Err(mismatch("p differs"));
                }
                if cp.block_size != block_size as u64 {
                    return Err(mismatch("block size differs"));
                }
                if cp.next_block > nblocks || cp.tie_indices.iter().any(|&i| i >= tables.len() as u64)
                {
                    return Err(mismatch("indices out of range for this family"));
                }
                next_block = cp.next_block;
                scanned = cp.scanned;
                ties = cp.tie_indices;
                best = match cp.best {
                    Some(s) => Some(s.parse::<BigInt>().map_err(|_| {
                        Error::CheckpointMismatch {
                            reason: "best value is not an integer".to_string(),
                        }
                    })?),
                    None => None,
                };
            }
        }
    }

    let mut blocks_left = options.limit_blocks.unwrap_or(u64::MAX).max(1);
    while next_block < nblocks && blocks_left > 0 {
        let take = chunk_blocks.min(nblocks - next_block).min(blocks_left);
        let chunk_end = next_block + take;
        let outcomes: Vec<(Option<BigInt>, Vec<u64>, u64)> = (next_block..chunk_end)
            .into_par_iter()
            .map(|b| {
                let lo = b as usize * block_size;
                let hi = (lo + block_size).min(tables.len());
                scan_block(&tables, lo, hi, &scorer, float_cutoff)
            })
            .collect();
        for (block_best, block_ties, block_scanned) in outcomes {
            scanned += block_scanned;
            if let Some(bb) = block_best {
                match &best {
                    Some(cur) if bb < *cur => {}
                    Some(cur) if bb == *cur => ties.extend(block_ties),
                    _ => {
                        best = Some(bb);
                        ties = block_ties;
                    }
                }
            }
        }
        next_block = chunk_end;
        blocks_left -= take;

        if let Some(sink) = &mut options.progress {
            let line = serde_json::json!({
                "family": family.descriptor(),
                "p": p.to_string(),
                "scanned": scanned,
                "total": tables.len() as u64,
                "best": best.as_ref().map(|b| scorer.to_rational(b.clone()).to_string()),
            });
            writeln!(sink, "{line}")?;
        }
        if float_cutoff.is_none() && next_block < nblocks {
            if let Some(path) = &options.checkpoint {
                let cp = Checkpoint {
                    family: family.descriptor(),
                    p: p.to_string(),
                    block_size: block_size as u64,
                    next_block,
                    scanned,
                    best: best.as_ref().map(|b| b.to_string()),
                    tie_indices: ties.clone(),
                };
                let tmp = path.with_extension("tmp");
                std::fs::write(&tmp, serde_json::to_string(&cp)?)?;
                std::fs::rename(&tmp, path)?;
            }
        }
    }

    let complete = next_block == nblocks;
    if complete {
        if let Some(path) = &options.checkpoint {
            let _ = std::fs::remove_file(path);
        }
    }

    let best = best.expect("families are nonempty and at least one block ran");
    let best_value = scorer.to_rational(best);
    let argmax_count = ties.len() as u64;
    let mut argmax_tables: Vec<Vec<i8>> = Vec::new();
    {
        let mut seen = HashSet::new();
        for &i in &ties {
            let f = &tables[i as usize];
            let f = if family.dedupe {
                canonical_form(f)?
            } else {
                f.clone()
            };
            if seen.insert(f.packed_bits()) {
                argmax_tables.push(f.table().to_vec());
            }
        }
    }
    argmax_tables.sort();
    let argmax = argmax_tables
        .iter()
        .map(|t| {
            let f = BooleanFunction::new(family.n, t.clone()).expect("valid");
            FunctionSpec::from_function(&f).to_string()
        })
        .collect();

    let margin_over_majority = if family.n % 2 == 1 {
        let maj = BooleanFunction::majority(family.n)?;
        Some(&best_value - &phi_poly(&maj).eval(p))
    } else {
        None
    };

    Ok(SearchReport {
        family: family.descriptor(),
        p: p.clone(),
        best_value,
        argmax,
        argmax_count,
        margin_over_majority,
        candidates_scanned: scanned,
        wall_time_secs: Some(start.elapsed().as_secs_f64()),
        complete,
    })
}

/// Scores tables[lo..hi]; with a cutoff, only candidates whose float score
/// clears it are scored exactly. Returns (block max, indices attaining it,
/// candidates examined).
fn scan_block(
    tables: &[BooleanFunction],
    lo: usize,
    hi: usize,
    scorer: &FixedPScorer,
    float_cutoff: Option<f64>,
) -> (Option<BigInt>, Vec<u64>, u64) {
    let mut wht = Vec::new();
    let mut scratch = LevelScratch::new(scorer.n());
    if scorer.has_fast_path() {
        let mut best: Option<i128> = None;
        let mut ties = Vec::new();
        for (i, t) in tables[lo..hi].iter().enumerate() {
            if let Some(cut) = float_cutoff {
                if scorer.score_f64(t.table(), &mut wht, &mut scratch) < cut {
                    continue;
                }
            }
            let s = scorer.score_i128(t.table(), &mut wht, &mut scratch);
            match best {
                Some(cur) if s < cur => {}
                Some(cur) if s == cur => ties.push((lo + i) as u64),
                _ => {
                    best = Some(s);
                    ties = vec![(lo + i) as u64];
                }
            }
        }
        (best.map(BigInt::from), ties, (hi - lo) as u64)
    } else {
        let mut best: Option<BigInt> = None;
        let mut ties = Vec::new();
        for (i, t) in tables[lo..hi].iter().enumerate() {
            if let Some(cut) = float_cutoff {
                if scorer.score_f64(t.table(), &mut wht, &mut scratch) < cut {
                    continue;
                }
            }
            let s = scorer.score_big(t.table(), &mut wht, &mut scratch);
            match &best {
                Some(cur) if s < *cur => {}
                Some(cur) if s == *cur => ties.push((lo + i) as u64),
                _ => {
                    best = Some(s);
                    ties = vec![(lo + i) as u64];
                }
            }
        }
        (best, ties, (hi - lo) as u64)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GridPoint {
    pub p: Rational,
    /// sign of phi_p(f) - phi_p(g): -1, 0, or +1
    pub sign: i8,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CrossoverReport {
    pub f: String,
    pub g: String,
    pub step: Rational,
    pub points: Vec<GridPoint>,
    /// adjacent grid pairs whose signs differ
    pub sign_changes: Vec<(Rational, Rational)>,
}

/// Sign of phi_p(f) - phi_p(g) on the grid {0, step, 2 step, ...} up to 1,
/// decided exactly at every point.
pub fn crossover_scan(
    f: &BooleanFunction,
    g: &BooleanFunction,
    step: &Rational,
) -> Result<CrossoverReport> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch {
            left: f.n(),
            right: g.n(),
        });
    }
    if *step <= Rational::zero() {
        return Err(Error::InvalidStep {
            got: step.to_string(),
        });
    }
    let diff = &phi_poly(f) - &phi_poly(g);
    let mut points = Vec::new();
    let mut p = Rational::zero();
    while p <= Rational::one() {
        let v = diff.eval(&p);
        let sign: i8 = if v.is_zero() {
            0
        } else if v.is_negative() {
            -1
        } else {
            1
        };
        points.push(GridPoint { p: p.clone(), sign });
        p = &p + step;
    }
    let mut sign_changes = Vec::new();
    for w in points.windows(2) {
        if w[0].sign != w[1].sign {
            sign_changes.push((w[0].p.clone(), w[1].p.clone()));
        }
    }
    Ok(CrossoverReport {
        f: FunctionSpec::from_function(f).to_string(),
        g: FunctionSpec::from_function(g).to_string(),
        step: step.clone(),
        points,
        sign_changes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::erasure::phi_at;
    use crate::rational::rat;

    fn counterexample() -> BooleanFunction {
        BooleanFunction::from_ltf(&LtfSpec::new(vec![1, -3, 1, -1, 3]).unwrap()).unwrap()
    }

    #[test]
    fn odd_counts() {
        assert_eq!(enumerate_odd(1).unwrap().count(), 2);
        assert_eq!(enumerate_odd(3).unwrap().count(), 16);
        assert_eq!(enumerate_odd(5).unwrap().count(), 65536);
        assert!(matches!(
            enumerate_odd(2),
            Err(Error::EvenDimension { .. })
        ));
        assert!(matches!(enumerate_odd(7), Err(Error::OddEnumTooLarge { n: 7 })));
    }

    #[test]
    fn odd_stream_is_odd_and_distinct() {
        let mut seen = HashSet::new();
        for f in enumerate_odd(3).unwrap() {
            assert!(f.is_odd());
            assert!(seen.insert(f.packed_bits()));
        }
        assert_eq!(seen.len(), 16);
        // first pattern is the first dictator
        let first = enumerate_odd(3).unwrap().next().unwrap();
        assert_eq!(first.table(), BooleanFunction::dictator(1, 3).unwrap().table());
    }

    #[test]
    fn odd_n3_contains_majority_twice() {
        let maj = BooleanFunction::majority(3).unwrap();
        let hits = enumerate_odd(3)
            .unwrap()
            .filter(|f| f.table() == maj.table() || f.table() == maj.negated().table())
            .count();
        assert_eq!(hits, 2);
    }

    #[test]
    fn odd_n5_contains_the_named_functions() {
        let maj = BooleanFunction::majority(5).unwrap().packed_bits();
        let cx = counterexample().packed_bits();
        let mut saw_maj = false;
        let mut saw_cx = false;
        let mut total = 0u64;
        for f in enumerate_odd(5).unwrap() {
            let packed = f.packed_bits();
            saw_maj |= packed == maj;
            saw_cx |= packed == cx;
            total += 1;
        }
        assert_eq!(total, 65536);
        assert!(saw_maj);
        assert!(saw_cx);
    }

    #[test]
    fn ltf_weight_one() {
        let raw = enumerate_ltf(5, 1, false).unwrap();
        assert_eq!(raw.len(), 32);
        let classes = enumerate_ltf(5, 1, true).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].table(), BooleanFunction::majority(5).unwrap().table());

        // odometer order runs -W..-1 then 1..W, so -x1 comes first
        let n1 = enumerate_ltf(1, 1, false).unwrap();
        assert_eq!(n1.len(), 2);
        let d = BooleanFunction::dictator(1, 1).unwrap();
        assert_eq!(n1[0].table(), d.negated().table());
        assert_eq!(n1[1].table(), d.table());
    }

    #[test]
    fn ltf_weight_three_contains_counterexample() {
        let raw = enumerate_ltf(5, 3, false).unwrap();
        let cx = counterexample();
        assert!(raw.iter().any(|f| f.table() == cx.table()));
        // every member is odd and distinct
        let mut seen = HashSet::new();
        for f in &raw {
            assert!(f.is_odd());
            assert!(seen.insert(f.packed_bits()));
        }

        let classes = enumerate_ltf(5, 3, true).unwrap();
        let cx_canon = canonical_form(&cx).unwrap();
        assert!(classes.iter().any(|f| f.table() == cx_canon.table()));
        assert!(classes.len() < raw.len());
    }

    #[test]
    fn ltf_rejects_bad_bounds() {
        assert!(matches!(
            enumerate_ltf(5, 0, false),
            Err(Error::InvalidWeightBound { got: 0 })
        ));
    }

    #[test]
    fn argmax_small_p_finds_majority() {
        let family = CandidateFamily::odd_all(3, true);
        let report = argmax_phi(&family, &rat(1, 100), false).unwrap();
        assert_eq!(report.candidates_scanned, 16);
        assert!(report.complete);
        let maj = BooleanFunction::majority(3).unwrap();
        assert_eq!(
            report.argmax,
            vec![FunctionSpec::from_function(&maj).to_string()]
        );
        // the 8-member flip class ties exactly
        assert_eq!(report.argmax_count, 8);
        assert_eq!(report.best_value, phi_at(&maj, &rat(1, 100)).unwrap());
        assert_eq!(report.margin_over_majority, Some(Rational::zero()));
    }

    #[test]
    fn argmax_explicit_family() {
        let specs = vec![
            FunctionSpec::parse("maj:5").unwrap(),
            FunctionSpec::parse("ltf:1,-3,1,-1,3").unwrap(),
        ];
        let family = CandidateFamily::explicit(5, specs, false);
        let report = argmax_phi(&family, &rat(2, 5), false).unwrap();
        assert_eq!(report.best_value, rat(2689, 6250));
        assert_eq!(report.margin_over_majority, Some(rat(3, 2500)));
        assert_eq!(report.candidates_scanned, 2);
        let cx = counterexample();
        assert_eq!(
            report.argmax,
            vec![FunctionSpec::from_function(&cx).to_string()]
        );
    }

    #[test]
    fn argmax_requires_candidates() {
        let family = CandidateFamily::explicit(5, Vec::new(), false);
        assert!(matches!(
            argmax_phi(&family, &rat(2, 5), false),
            Err(Error::EmptyFamily)
        ));
        let mixed = CandidateFamily::explicit(
            5,
            vec![FunctionSpec::parse("maj:3").unwrap()],
            false,
        );
        assert!(matches!(
            argmax_phi(&mixed, &rat(2, 5), false),
            Err(Error::DimensionMismatch { .. })
        ));
        let family = CandidateFamily::odd_all(3, true);
        assert!(argmax_phi(&family, &Rational::zero(), false).is_err());
    }

    #[test]
    fn argmax_deterministic_across_worker_counts() {
        let family = CandidateFamily::odd_all(3, true);
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                let mut options = ArgmaxOptions {
                    block_size: 2,
                    ..ArgmaxOptions::default()
                };
                argmax_phi_with(&family, &rat(3, 10), &mut options).unwrap()
            })
        };
        let one = serde_json::to_string(&run(1).normalized()).unwrap();
        let four = serde_json::to_string(&run(4).normalized()).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn argmax_prefilter_matches_exact() {
        let family = CandidateFamily::odd_all(3, true);
        for p in [rat(1, 100), rat(3, 10), rat(2, 5), rat(1, 2), rat(9, 10)] {
            let exact = argmax_phi(&family, &p, false).unwrap().normalized();
            let filtered = argmax_phi(&family, &p, true).unwrap().normalized();
            assert_eq!(exact, filtered, "p = {p}");
        }
    }

    #[test]
    fn argmax_checkpoint_resume() {
        let dir = std::env::temp_dir().join(format!("phicube-ckpt-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("odd3.json");
        let _ = std::fs::remove_file(&path);
        let family = CandidateFamily::odd_all(3, false);
        let p = rat(2, 5);

        let mut first = ArgmaxOptions {
            block_size: 2,
            checkpoint_every_blocks: 1,
            checkpoint: Some(path.clone()),
            limit_blocks: Some(3),
            ..ArgmaxOptions::default()
        };
        let partial = argmax_phi_with(&family, &p, &mut first).unwrap();
        assert!(!partial.complete);
        assert_eq!(partial.candidates_scanned, 6);
        assert!(path.exists());

        let mut second = ArgmaxOptions {
            block_size: 2,
            checkpoint_every_blocks: 1,
            checkpoint: Some(path.clone()),
            ..ArgmaxOptions::default()
        };
        let resumed = argmax_phi_with(&family, &p, &mut second).unwrap();
        assert!(resumed.complete);
        assert!(!path.exists(), "finished scans clean up their checkpoint");

        let straight = argmax_phi(&family, &p, false).unwrap();
        assert_eq!(resumed.normalized(), straight.normalized());

        // a checkpoint from a different search is refused
        std::fs::write(&path, serde_json::to_string(&Checkpoint {
            family: "odd:n=5:dedupe=false".to_string(),
            p: p.to_string(),
            block_size: 2,
            next_block: 1,
            scanned: 2,
            best: None,
            tie_indices: vec![],
        }).unwrap()).unwrap();
        let mut third = ArgmaxOptions {
            block_size: 2,
            checkpoint: Some(path.clone()),
            ..ArgmaxOptions::default()
        };
        assert!(matches!(
            argmax_phi_with(&family, &p, &mut third),
            Err(Error::CheckpointMismatch { .. })
        ));
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn progress_lines_are_json() {
        let dir = std::env::temp_dir().join(format!("phicube-progress-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("progress.jsonl");
        let family = CandidateFamily::odd_all(3, true);
        {
            let sink = std::fs::File::create(&path).unwrap();
            let mut options = ArgmaxOptions {
                block_size: 4,
                checkpoint_every_blocks: 1,
                progress: Some(Box::new(sink)),
                ..ArgmaxOptions::default()
            };
            argmax_phi_with(&family, &rat(2, 5), &mut options).unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        for line in &lines {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["total"], 16);
        }
        let last: serde_json::Value = serde_json::from_str(lines[3]).unwrap();
        assert_eq!(last["scanned"], 16);
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn crossover_counterexample_vs_majority() {
        let report = crossover_scan(
            &counterexample(),
            &BooleanFunction::majority(5).unwrap(),
            &rat(1, 100),
        )
        .unwrap();
        assert_eq!(report.points.len(), 101);
        // majority ahead near zero, behind at 0.4
        assert_eq!(report.points[1].sign, -1);
        assert_eq!(report.points[10].sign, -1);
        assert_eq!(report.points[40].sign, 1);
        assert!(report
            .sign_changes
            .iter()
            .any(|(a, b)| *a >= rat(1, 10) && *b <= rat(2, 5)));
    }

    #[test]
    fn crossover_self_is_flat() {
        let maj = BooleanFunction::majority(3).unwrap();
        let report = crossover_scan(&maj, &maj, &rat(1, 4)).unwrap();
        assert!(report.points.iter().all(|pt| pt.sign == 0));
        assert!(report.sign_changes.is_empty());
    }

    #[test]
    fn crossover_dictator_vs_majority() {
        let d = BooleanFunction::dictator(1, 3).unwrap();
        let maj = BooleanFunction::majority(3).unwrap();
        let report = crossover_scan(&d, &maj, &rat(1, 10)).unwrap();
        let sign_at = |k: usize| report.points[k].sign;
        assert_eq!(sign_at(4), -1);
        assert_eq!(sign_at(5), 0);
        assert_eq!(sign_at(6), 1);
        assert!(!report.sign_changes.is_empty());
    }

    #[test]
    fn crossover_rejects_bad_input() {
        let maj3 = BooleanFunction::majority(3).unwrap();
        let maj5 = BooleanFunction::majority(5).unwrap();
        assert!(matches!(
            crossover_scan(&maj3, &maj5, &rat(1, 10)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            crossover_scan(&maj3, &maj3, &Rational::zero()),
            Err(Error::InvalidStep { .. })
        ));
    }

    #[test]
    fn family_descriptors() {
        assert_eq!(
            CandidateFamily::odd_all(5, true).descriptor(),
            "odd:n=5:dedupe=true"
        );
        assert_eq!(
            CandidateFamily::ltf(5, 3, false).descriptor(),
            "ltf:n=5:w=3:dedupe=false"
        );
        let ex = CandidateFamily::explicit(
            3,
            vec![FunctionSpec::parse("maj:3").unwrap()],
            false,
        );
        assert_eq!(ex.descriptor(), "explicit:n=3:k=1:dedupe=false:[maj:3]");
    }
}
