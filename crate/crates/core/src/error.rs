use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("denominator is zero")]
    ZeroDenominator,

    #[error("cannot parse {input:?} as a rational number: {reason}")]
    InvalidNumber { input: String, reason: String },

    #[error("invalid function spec {input:?} at byte {position}: {reason}")]
    SpecParse {
        input: String,
        position: usize,
        reason: String,
    },

    #[error("truth table has {got} entries, expected 2^{n} = {expected}")]
    TableLength { n: u32, expected: usize, got: usize },

    #[error("truth table entry at index {index} is {value}, must be +1 or -1")]
    TableValue { index: usize, value: i8 },

    #[error("dimension n={n} exceeds the supported maximum {max} for {what}")]
    DimensionTooLarge { n: u32, max: u32, what: &'static str },

    #[error("{what} requires odd dimension, got n={n}")]
    EvenDimension { n: u32, what: &'static str },

    #[error("weight vector is empty")]
    EmptyWeights,

    #[error("coordinate index {index} out of range for n={n} (valid: 1..={n})")]
    CoordinateRange { index: u32, n: u32 },

    #[error("weights {weights:?} give a zero sign at x = {point}; threshold functions must not tie")]
    LtfTie { weights: Vec<i64>, point: String },

    #[error("dimension mismatch: n={left} vs n={right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: u32, got: usize },

    #[error("coordinate z_{index} is outside [-1, 1]")]
    ExtensionRange { index: usize },

    #[error("coefficient for subset mask {mask:#x} is not a multiple of 2^-n")]
    NonDyadicCoefficient { mask: u64 },

    #[error("coefficient for subset mask {mask:#x} is too large for the scaled integer representation")]
    CoefficientOverflow { mask: u64 },

    #[error("expansion evaluates to {value} at point index {point}, not +1 or -1")]
    NotBoolean { point: usize, value: String },

    #[error("invalid permutation {perm:?}: not a bijection on 0..{n}")]
    InvalidPermutation { perm: Vec<usize>, n: u32 },

    #[error("sign vector entry at index {index} is {value}, must be +1 or -1")]
    InvalidSign { index: usize, value: i8 },

    #[error(
        "canonical form enumerates n! * 2^n symmetries; n={n} exceeds 8. \
         For larger n dedupe truth tables by hash instead"
    )]
    CanonicalTooLarge { n: u32 },

    #[error("erasure rate p={p} out of range, need {need}")]
    InvalidProbability { p: String, need: &'static str },

    #[error("function is biased: E[f] != 0")]
    BiasedFunction,

    #[error(
        "enumerating all odd functions takes 2^(2^(n-1)) candidates; n={n} > 5 is out of reach \
         (n=5 already gives 65536)"
    )]
    OddEnumTooLarge { n: u32 },

    #[error("weight bound must be at least 1, got {got}")]
    InvalidWeightBound { got: i64 },

    #[error("candidate family is empty")]
    EmptyFamily,

    #[error("sample p={sample} is not below the certified threshold p0={p0}")]
    SampleAboveThreshold { sample: String, p0: String },

    #[error("step must be positive, got {got}")]
    InvalidStep { got: String },

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("checkpoint does not match this search: {reason}")]
    CheckpointMismatch { reason: String },

    #[error("checkpoint is malformed: {0}")]
    CheckpointFormat(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
