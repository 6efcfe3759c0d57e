//! Exact analysis of Boolean functions on the discrete cube under random
//! erasures.
//!
//! A function f: {-1,1}^n -> {-1,1} is fed inputs whose coordinates are
//! independently erased to 0 with probability 1-p and kept uniformly +-1
//! otherwise. The central quantity is phi_p(f) = E|f(z)|, where f extends
//! multilinearly to [-1,1]^n. Everything user-facing is computed in exact
//! rational arithmetic; floating point appears only in Monte Carlo
//! estimators and as a prefilter inside exhaustive searches, always backed
//! by an exact confirmation pass.

pub mod boolfn;
pub mod bounds;
pub mod erasure;
pub mod error;
pub mod fnspec;
pub mod fourier;
pub mod mc;
pub mod poly;
pub mod rational;
pub mod search;
pub mod symmetry;

pub use boolfn::{BooleanFunction, LtfSpec};
pub use bounds::{DictatorReport, GapReport, Lemma1Certificate, ScanStrategy, SmallPReport};
pub use erasure::{ErasureModel, PhiReport};
pub use error::{Error, Result};
pub use fnspec::FunctionSpec;
pub use fourier::FourierExpansion;
pub use mc::{McConfig, McEstimate};
pub use poly::RationalPoly;
pub use rational::{rat, Rational};
pub use search::{ArgmaxOptions, CandidateFamily, CrossoverReport, FamilyKind, SearchReport};
pub use symmetry::{canonical_form, CubeSymmetry};
