//! Compact text grammar for naming functions on the command line and in
//! reports:
//!
//! - `ltf:1,-3,1,-1,3`   threshold function from integer weights
//! - `maj:5`             majority on n inputs (n odd)
//! - `dict:2,5`          the coordinate x_2 on 5 inputs
//! - `table:5:<8 hex>`   explicit truth table; the dimension is spelled out
//!   so tables with n < 3 are unambiguous. Hex digits pack the table
//!   MSB-first in index order, set bit = value -1.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boolfn::{BooleanFunction, LtfSpec};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum FunctionSpec {
    Ltf { weights: Vec<i64> },
    Majority { n: u32 },
    Dictator { index: u32, n: u32 },
    Table { n: u32, bits: Vec<u8> },
}

impl FunctionSpec {
    pub fn parse(input: &str) -> Result<Self> {
        let err = |position: usize, reason: &str| Error::SpecParse {
            input: input.to_string(),
            position,
            reason: reason.to_string(),
        };
        let (kind, rest) = input
            .split_once(':')
            .ok_or_else(|| err(0, "expected '<kind>:<args>'"))?;
        let body_at = kind.len() + 1;
        match kind {
            "ltf" => {
                let mut weights = Vec::new();
                let mut at = body_at;
                for tok in rest.split(',') {
                    let w = tok.trim().parse::<i64>().map_err(|_| {
                        err(at, &format!("bad weight {:?}, expected an integer", tok.trim()))
                    })?;
                    weights.push(w);
                    at += tok.len() + 1;
                }
                LtfSpec::new(weights.clone())?;
                Ok(FunctionSpec::Ltf { weights })
            }
            "maj" => {
                let n = rest
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| err(body_at, &format!("bad dimension {rest:?}")))?;
                BooleanFunction::majority(n)?;
                Ok(FunctionSpec::Majority { n })
            }
            "dict" => {
                let (i, n) = rest
                    .split_once(',')
                    .ok_or_else(|| err(body_at, "expected 'dict:<i>,<n>'"))?;
                let index = i
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| err(body_at, &format!("bad coordinate {:?}", i.trim())))?;
                let n = n.trim().parse::<u32>().map_err(|_| {
                    err(body_at + i.len() + 1, &format!("bad dimension {:?}", n.trim()))
                })?;
                BooleanFunction::dictator(index, n)?;
                Ok(FunctionSpec::Dictator { index, n })
            }
            "table" => {
                let (dim, hex) = rest
                    .split_once(':')
                    .ok_or_else(|| err(body_at, "expected 'table:<n>:<hex>'"))?;
                let n = dim
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| err(body_at, &format!("bad dimension {:?}", dim.trim())))?;
                let hex = hex.trim();
                let hex_at = body_at + dim.len() + 1;
                let expected = expected_hex_len(n);
                if hex.len() != expected {
                    return Err(err(
                        hex_at,
                        &format!("expected {expected} hex digits for n={n}, got {}", hex.len()),
                    ));
                }
                let mut bits = vec![0u8; hex.len().div_ceil(2)];
                for (pos, ch) in hex.bytes().enumerate() {
                    let nibble = (ch as char).to_digit(16).ok_or_else(|| {
                        err(hex_at + pos, &format!("bad hex digit {:?}", ch as char))
                    })? as u8;
                    bits[pos / 2] |= if pos % 2 == 0 { nibble << 4 } else { nibble };
                }
                // construction validates padding bits for n < 3
                BooleanFunction::from_packed_bits(n, &bits)?;
                Ok(FunctionSpec::Table { n, bits })
            }
            other => Err(err(0, &format!("unknown kind {other:?}"))),
        }
    }

    pub fn from_function(f: &BooleanFunction) -> Self {
        FunctionSpec::Table {
            n: f.n(),
            bits: f.packed_bits(),
        }
    }

    pub fn to_function(&self) -> Result<BooleanFunction> {
        match self {
            FunctionSpec::Ltf { weights } => {
                BooleanFunction::from_ltf(&LtfSpec::new(weights.clone())?)
            }
            FunctionSpec::Majority { n } => BooleanFunction::majority(*n),
            FunctionSpec::Dictator { index, n } => BooleanFunction::dictator(*index, *n),
            FunctionSpec::Table { n, bits } => BooleanFunction::from_packed_bits(*n, bits),
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            FunctionSpec::Ltf { weights } => weights.len() as u32,
            FunctionSpec::Majority { n } => *n,
            FunctionSpec::Dictator { n, .. } => *n,
            FunctionSpec::Table { n, .. } => *n,
        }
    }
}

fn expected_hex_len(n: u32) -> usize {
    // one hex digit covers four table entries; n < 2 still needs one digit
    ((1usize << n) / 4).max(1)
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Ltf { weights } => {
                write!(f, "ltf:")?;
                for (i, w) in weights.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{w}")?;
                }
                Ok(())
            }
            FunctionSpec::Majority { n } => write!(f, "maj:{n}"),
            FunctionSpec::Dictator { index, n } => write!(f, "dict:{index},{n}"),
            FunctionSpec::Table { n, bits } => {
                write!(f, "table:{n}:")?;
                let digits = expected_hex_len(*n);
                for pos in 0..digits {
                    let byte = bits[pos / 2];
                    let nibble = if pos % 2 == 0 { byte >> 4 } else { byte & 0xf };
                    write!(f, "{nibble:x}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionSpec::parse(s)
    }
}
