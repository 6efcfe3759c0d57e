//! Boolean functions on the n-dimensional cube, stored as dense truth
//! tables over {-1,+1}.
//!
//! Point encoding: index x in 0..2^n has bit i (from the least significant
//! end) equal to 1 exactly when coordinate x_{i+1} = -1. So index 0 is the
//! all-ones point and complementing an index negates every coordinate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on the dimension; tables are dense, 2^24 entries is where this
/// representation stops being reasonable.
pub const MAX_N: u32 = 24;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BooleanFunction {
    n: u32,
    table: Vec<i8>,
}

impl BooleanFunction {
    pub fn new(n: u32, table: Vec<i8>) -> Result<Self> {
        check_dimension(n)?;
        let expected = 1usize << n;
        if table.len() != expected {
            return Err(Error::TableLength {
                n,
                expected,
                got: table.len(),
            });
        }
        for (index, &value) in table.iter().enumerate() {
            if value != 1 && value != -1 {
                return Err(Error::TableValue { index, value });
            }
        }
        Ok(BooleanFunction { n, table })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_points(&self) -> usize {
        self.table.len()
    }

    pub fn value(&self, x: usize) -> i8 {
        self.table[x]
    }

    pub fn table(&self) -> &[i8] {
        &self.table
    }

    /// Majority of n inputs; ties are impossible since n must be odd.
    pub fn majority(n: u32) -> Result<Self> {
        check_dimension(n)?;
        if n % 2 == 0 {
            return Err(Error::EvenDimension { n, what: "majority" });
        }
        let table = (0..1usize << n)
            .map(|x| if 2 * x.count_ones() < n { 1 } else { -1 })
            .collect();
        Ok(BooleanFunction { n, table })
    }

    /// The i-th dictator f(x) = x_i, with i in 1..=n.
    pub fn dictator(i: u32, n: u32) -> Result<Self> {
        check_dimension(n)?;
        if i == 0 || i > n {
            return Err(Error::CoordinateRange { index: i, n });
        }
        let bit = 1usize << (i - 1);
        let table = (0..1usize << n)
            .map(|x| if x & bit == 0 { 1 } else { -1 })
            .collect();
        Ok(BooleanFunction { n, table })
    }

    pub fn constant(n: u32, sign: i8) -> Result<Self> {
        check_dimension(n)?;
        if sign != 1 && sign != -1 {
            return Err(Error::TableValue { index: 0, value: sign });
        }
        Ok(BooleanFunction {
            n,
            table: vec![sign; 1 << n],
        })
    }

    pub fn parity(n: u32) -> Result<Self> {
        check_dimension(n)?;
        let table = (0..1usize << n)
            .map(|x| if x.count_ones() % 2 == 0 { 1 } else { -1 })
            .collect();
        Ok(BooleanFunction { n, table })
    }

    pub fn from_ltf(spec: &LtfSpec) -> Result<Self> {
        spec.truth_table()
    }

    pub fn negated(&self) -> Self {
        BooleanFunction {
            n: self.n,
            table: self.table.iter().map(|v| -v).collect(),
        }
    }

    /// f(-x) == -f(x) for all x; -x is the complemented index.
    pub fn is_odd(&self) -> bool {
        let mask = self.table.len() - 1;
        (0..self.table.len() / 2).all(|x| self.table[x] == -self.table[mask ^ x])
    }

    /// E[f] == 0 under the uniform distribution.
    pub fn is_unbiased(&self) -> bool {
        self.table.iter().map(|&v| v as i64).sum::<i64>() == 0
    }

    /// Truth table packed to bits, most significant bit of each byte first,
    /// bit set exactly when the value is -1. Lexicographic comparison of the
    /// packed form matches index-order comparison of the table.
    pub fn packed_bits(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.table.len().div_ceil(8)];
        for (x, &v) in self.table.iter().enumerate() {
            if v == -1 {
                out[x / 8] |= 0x80 >> (x % 8);
            }
        }
        out
    }

    pub fn from_packed_bits(n: u32, bits: &[u8]) -> Result<Self> {
        check_dimension(n)?;
        let len = 1usize << n;
        if bits.len() != len.div_ceil(8) {
            return Err(Error::TableLength {
                n,
                expected: len.div_ceil(8),
                got: bits.len(),
            });
        }
        // padding bits beyond 2^n (only possible for n < 3) must be clear
        if n < 3 && bits[0] & (0xffu8 >> len) != 0 {
            return Err(Error::TableValue {
                index: len,
                value: 0,
            });
        }
        let table = (0..len)
            .map(|x| if bits[x / 8] & (0x80 >> (x % 8)) != 0 { -1 } else { 1 })
            .collect();
        Ok(BooleanFunction { n, table })
    }
}

impl std::fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BooleanFunction(n={}, ", self.n)?;
        for &v in &self.table {
            write!(f, "{}", if v == 1 { '+' } else { '-' })?;
        }
        write!(f, ")")
    }
}

fn check_dimension(n: u32) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::DimensionTooLarge {
            n,
            max: MAX_N,
            what: "dense truth tables",
        });
    }
    Ok(())
}

/// Integer-weight linear threshold function sgn(w . x). Construction fails
/// if any input lands exactly on the hyperplane, so the sign is always
/// well defined.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LtfSpec {
    weights: Vec<i64>,
}

impl LtfSpec {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        check_dimension(weights.len() as u32)?;
        Ok(LtfSpec { weights })
    }

    pub fn n(&self) -> u32 {
        self.weights.len() as u32
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    fn truth_table(&self) -> Result<BooleanFunction> {
        let n = self.n();
        let table = (0..1usize << n)
            .map(|x| {
                let mut sum = 0i64;
                for (i, &w) in self.weights.iter().enumerate() {
                    sum += if x >> i & 1 == 0 { w } else { -w };
                }
                match sum.signum() {
                    1 => Ok(1),
                    -1 => Ok(-1),
                    _ => Err(Error::LtfTie {
                        weights: self.weights.clone(),
                        point: point_string(x, n),
                    }),
                }
            })
            .collect::<Result<Vec<i8>>>()?;
        Ok(BooleanFunction { n, table })
    }
}

/// Point index rendered as a sign tuple, e.g. "(+1, -1, +1)".
pub fn point_string(x: usize, n: u32) -> String {
    let signs: Vec<&str> = (0..n)
        .map(|i| if x >> i & 1 == 0 { "+1" } else { "-1" })
        .collect();
    format!("({})", signs.join(", "))
}
