//! Symmetries of the cube: coordinate permutations combined with
//! coordinate sign flips, optionally followed by output negation. These
//! leave the erasure model invariant, so any quantity derived from it is
//! constant on orbits. Canonicalization picks the orbit minimum under the
//! truth-table order, giving a cheap equivalence test.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};

/// Action on functions: (g.f)(x) = neg * f(y) with y_i = flips[i] *
/// x_{perm[i]} (0-based coordinates).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CubeSymmetry {
    perm: Vec<usize>,
    flips: Vec<i8>,
    negate_output: bool,
}

impl CubeSymmetry {
    pub fn new(perm: Vec<usize>, flips: Vec<i8>, negate_output: bool) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidPermutation {
                    perm: perm.clone(),
                    n: n as u32,
                });
            }
            seen[p] = true;
        }
        if flips.len() != n {
            return Err(Error::DimensionMismatch {
                left: n as u32,
                right: flips.len() as u32,
            });
        }
        for (index, &s) in flips.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(Error::InvalidSign { index, value: s });
            }
        }
        Ok(CubeSymmetry {
            perm,
            flips,
            negate_output,
        })
    }

    pub fn identity(n: u32) -> Self {
        CubeSymmetry {
            perm: (0..n as usize).collect(),
            flips: vec![1; n as usize],
            negate_output: false,
        }
    }

    pub fn n(&self) -> u32 {
        self.perm.len() as u32
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn flips(&self) -> &[i8] {
        &self.flips
    }

    pub fn negates_output(&self) -> bool {
        self.negate_output
    }

    /// Index of y where y_i = flips[i] * x_{perm[i]}.
    #[inline]
    fn image_index(&self, x: usize) -> usize {
        let mut y = 0usize;
        for (i, &p) in self.perm.iter().enumerate() {
            let bit = (x >> p & 1) ^ usize::from(self.flips[i] == -1);
            y |= bit << i;
        }
        y
    }

    pub fn apply(&self, f: &BooleanFunction) -> Result<BooleanFunction> {
        if f.n() != self.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: f.n(),
            });
        }
        let sign = if self.negate_output { -1 } else { 1 };
        let table = (0..f.num_points())
            .map(|x| sign * f.value(self.image_index(x)))
            .collect();
        BooleanFunction::new(f.n(), table)
    }

    /// Group product: (self * other).apply(f) == self.apply(other.apply(f)).
    pub fn compose(&self, other: &CubeSymmetry) -> Result<CubeSymmetry> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let n = self.perm.len();
        let mut perm = vec![0usize; n];
        let mut flips = vec![1i8; n];
        for i in 0..n {
            perm[i] = self.perm[other.perm[i]];
            flips[i] = other.flips[i] * self.flips[other.perm[i]];
        }
        Ok(CubeSymmetry {
            perm,
            flips,
            negate_output: self.negate_output != other.negate_output,
        })
    }

    pub fn inverse(&self) -> CubeSymmetry {
        let n = self.perm.len();
        let mut perm = vec![0usize; n];
        let mut flips = vec![1i8; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            flips[self.perm[i]] = self.flips[i];
        }
        CubeSymmetry {
            perm,
            flips,
            negate_output: self.negate_output,
        }
    }
}

/// Largest n for which the full symmetry orbit (n! 2^n elements) is
/// enumerated; beyond this the group is too large to scan directly.
pub const MAX_CANONICAL_N: u32 = 8;

/// Orbit minimum of f under permutations and coordinate flips, comparing
/// truth tables pointwise from index 0 with +1 before -1. Majority is its
/// own canonical form under this order.
pub fn canonical_form(f: &BooleanFunction) -> Result<BooleanFunction> {
    canonical_form_with(f, false)
}

/// As [`canonical_form`], optionally folding output negation into the
/// group so that f and -f land in the same class.
pub fn canonical_form_with(f: &BooleanFunction, include_output_negation: bool) -> Result<BooleanFunction> {
    let n = f.n();
    if n > MAX_CANONICAL_N {
        return Err(Error::CanonicalTooLarge { n });
    }
    let len = f.num_points();
    let mut best: Vec<i8> = f.table().to_vec();
    let mut candidate = vec![0i8; len];
    let signs = if include_output_negation {
        &[1i8, -1][..]
    } else {
        &[1i8][..]
    };

    for perm in (0..n as usize).permutations(n as usize) {
        for flip_mask in 0..1usize << n {
            // y_i = sign_i * x_{perm[i]} as in CubeSymmetry::image_index
            for &sign in signs {
                let mut better = false;
                for (x, slot) in candidate.iter_mut().enumerate() {
                    let mut y = 0usize;
                    for (i, &p) in perm.iter().enumerate() {
                        let bit = (x >> p & 1) ^ (flip_mask >> i & 1);
                        y |= bit << i;
                    }
                    let v = sign * f.value(y);
                    *slot = v;
                    if !better {
                        // bigger table value means smaller encoding bit
                        match v.cmp(&best[x]) {
                            std::cmp::Ordering::Greater => better = true,
                            std::cmp::Ordering::Less => break,
                            std::cmp::Ordering::Equal => {}
                        }
                    }
                }
                if better {
                    best.copy_from_slice(&candidate);
                }
            }
        }
    }
    BooleanFunction::new(n, best)
}

/// Whether two functions lie in the same orbit.
pub fn equivalent(f: &BooleanFunction, g: &BooleanFunction) -> Result<bool> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch {
            left: f.n(),
            right: g.n(),
        });
    }
    Ok(canonical_form(f)? == canonical_form(g)?)
}
