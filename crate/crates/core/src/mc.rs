//! Sampling cross-check for the exact engine. Coordinates are revealed
//! independently (+-1 with probability p/2 each, erased to 0 otherwise) and
//! f is evaluated at z through its expansion restricted to the revealed
//! set, which is an integer sum, so the only float error in an estimate is
//! the final averaging.
//!
//! Draw procedure, fixed for reproducibility: samples are consumed in
//! chunks of 65536; chunk j uses a ChaCha8 generator seeded with the
//! configured seed on stream j. Each coordinate draws one uniform f64 for
//! the erasure decision and, only when revealed, one bool for the sign.
//! Chunk sums are merged in ascending chunk order, so estimates do not
//! depend on the worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::fourier::wht_scaled_into;

const CHUNK: u64 = 65536;

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct McConfig {
    p: f64,
    samples: u64,
    seed: u64,
}

impl McConfig {
    pub fn new(p: f64, samples: u64, seed: u64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability {
                p: p.to_string(),
                need: "0 < p < 1",
            });
        }
        if samples == 0 {
            return Err(Error::NoSamples);
        }
        Ok(McConfig { p, samples, seed })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// sample standard deviation / sqrt(samples); 0 when samples = 1
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    /// generator identity, so fixtures name their stream algorithm
    pub rng: String,
}

/// Revealed and negative coordinate masks for one sample, in index-bit
/// convention (bit i set in `neg` means z_{i+1} = -1).
fn draw_masks(n: u32, p: f64, rng: &mut ChaCha8Rng) -> (u32, u32) {
    let mut revealed = 0u32;
    let mut neg = 0u32;
    for i in 0..n {
        if rng.gen::<f64>() < p {
            revealed |= 1 << i;
            if rng.gen::<bool>() {
                neg |= 1 << i;
            }
        }
    }
    (revealed, neg)
}

/// One draw of z under the erasure law.
pub fn sample_z(n: u32, p: f64, rng: &mut ChaCha8Rng) -> Vec<i8> {
    let (revealed, neg) = draw_masks(n, p, rng);
    (0..n)
        .map(|i| {
            if revealed >> i & 1 == 0 {
                0
            } else if neg >> i & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .collect()
}

/// 2^n f(z) for the sample (revealed, neg): the expansion terms supported
/// inside the revealed set, each weighted by its sign on z.
fn eval_scaled(wht: &[i64], revealed: u32, neg: u32) -> i64 {
    let mut acc = 0i64;
    let mut t = revealed as usize;
    loop {
        let sign = ((t as u32 & neg).count_ones() & 1) as i64;
        acc += wht[t] * (1 - 2 * sign);
        if t == 0 {
            break;
        }
        t = (t - 1) & revealed as usize;
    }
    acc
}

fn estimate_with(
    f: &BooleanFunction,
    config: &McConfig,
    value: impl Fn(f64) -> f64 + Sync,
) -> McEstimate {
    let n = f.n();
    let mut wht = Vec::new();
    wht_scaled_into(f.table(), &mut wht);
    let scale = 1.0 / (1u64 << n) as f64;
    let nchunks = config.samples.div_ceil(CHUNK);

    let sums: Vec<(f64, f64)> = (0..nchunks)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(j);
            let count = CHUNK.min(config.samples - j * CHUNK);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..count {
                let (revealed, neg) = draw_masks(n, config.p, &mut rng);
                let v = value(eval_scaled(&wht, revealed, neg) as f64 * scale);
                sum += v;
                sum_sq += v * v;
            }
            (sum, sum_sq)
        })
        .collect();

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for (s, s2) in sums {
        sum += s;
        sum_sq += s2;
    }
    let count = config.samples as f64;
    let mean = sum / count;
    let std_error = if config.samples > 1 {
        let var = ((sum_sq - count * mean * mean) / (count - 1.0)).max(0.0);
        (var / count).sqrt()
    } else {
        0.0
    };
    McEstimate {
        mean,
        std_error,
        samples: config.samples,
        seed: config.seed,
        rng: "chacha8".to_string(),
    }
}

/// Estimates E|f(z)|.
pub fn estimate_phi(f: &BooleanFunction, config: &McConfig) -> McEstimate {
    estimate_with(f, config, f64::abs)
}

/// Estimates E[f(z)^2].
pub fn estimate_sq(f: &BooleanFunction, config: &McConfig) -> McEstimate {
    estimate_with(f, config, |v| v * v)
}
