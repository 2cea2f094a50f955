//! Exact and numerical evaluation of infinite utility streams.
//!
//! The crate covers four layers:
//!
//! * [`stream`]: eventually-periodic streams with exact rational entries,
//!   bounded numerical streams, permutations, and stream-building operators.
//! * [`evaluators`]: partial means, Cesàro averages, discounted utilitarian
//!   values and their `delta -> 1` behaviour, and the four Banach-limit bound
//!   functionals.
//! * [`orderings`]: exact decision procedures for the Cesàro, catching-up and
//!   fixed-step catching-up criteria, plus a brute-force oracle.
//! * [`axioms`]: executable welfare axioms, a registry of comparison rules and
//!   a seeded counterexample search with greedy shrinking.

pub mod axioms;
pub mod error;
pub mod evaluators;
pub mod orderings;
pub mod rational;
pub mod stream;

pub use error::{Error, Result};

pub use orderings::{ComparisonResult, Verdict};
pub use rational::Rational;
pub use stream::{
    BoundedStream, EpStream, FinitePermutation, FixedStepPermutation, Scalar, Stream,
};
