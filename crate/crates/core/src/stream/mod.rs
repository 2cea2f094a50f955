//! Utility streams and the operators that build new streams from old ones.
//!
//! Generations are indexed from 1. Two stream classes are supported:
//!
//! * [`EpStream`]: eventually-periodic streams with exact rational entries.
//!   Every criterion in this crate is exactly decidable on this class.
//! * [`BoundedStream`]: a deterministic rule `t -> f64` with a declared
//!   sup-norm bound. Values are never converted to rationals, so anything
//!   computed from them is an estimate.

mod bounded;
mod ep;
pub mod format;
mod permutation;

pub use bounded::{BoundedStream, GeneratorSpec, GENERATORS};
pub use ep::EpStream;
pub use permutation::{FinitePermutation, FixedStepPermutation};

use crate::error::Result;
use crate::rational::{self, Rational};

/// A value that is either exact or a floating-point approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Approx(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational::to_f64(r),
            Scalar::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }
}

/// Either stream class.
#[derive(Clone, Debug)]
pub enum Stream {
    Ep(EpStream),
    Bounded(BoundedStream),
}

impl Stream {
    pub fn value_at(&self, t: u64) -> Result<Scalar> {
        match self {
            Stream::Ep(s) => Ok(Scalar::Exact(s.value_at(t).clone())),
            Stream::Bounded(s) => s.value_at(t).map(Scalar::Approx),
        }
    }

    pub fn as_ep(&self) -> Option<&EpStream> {
        match self {
            Stream::Ep(s) => Some(s),
            Stream::Bounded(_) => None,
        }
    }

    /// A sup-norm bound: exact maximum for `Ep`, the declared bound otherwise.
    pub fn sup_bound(&self) -> f64 {
        match self {
            Stream::Ep(s) => rational::to_f64(&s.sup_abs()),
            Stream::Bounded(s) => s.bound(),
        }
    }

    /// Floating-point view used by the numerical sweeps.
    pub fn approx_view(&self) -> ApproxView<'_> {
        match self {
            Stream::Ep(s) => ApproxView::Ep {
                head: s.head().iter().map(rational::to_f64).collect(),
                cycle: s.cycle().iter().map(rational::to_f64).collect(),
            },
            Stream::Bounded(s) => ApproxView::Bounded(s),
        }
    }

    /// `[u_1..u_T]_rep`. Exact for `Ep`; a periodic approximate stream for
    /// `Bounded` inputs.
    pub fn replicate_prefix(&self, horizon: u64) -> Result<Stream> {
        match self {
            Stream::Ep(s) => s.replicate_prefix(horizon).map(Stream::Ep),
            Stream::Bounded(s) => s.replicate_prefix(horizon).map(Stream::Bounded),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Stream::Ep(s) => s.to_string(),
            Stream::Bounded(s) => s.label().to_string(),
        }
    }
}

impl From<EpStream> for Stream {
    fn from(s: EpStream) -> Self {
        Stream::Ep(s)
    }
}

impl From<BoundedStream> for Stream {
    fn from(s: BoundedStream) -> Self {
        Stream::Bounded(s)
    }
}

/// Cheap `f64` access to a stream's coordinates.
pub enum ApproxView<'a> {
    Ep { head: Vec<f64>, cycle: Vec<f64> },
    Bounded(&'a BoundedStream),
}

impl ApproxView<'_> {
    pub fn at(&self, t: u64) -> Result<f64> {
        match self {
            ApproxView::Ep { head, cycle } => {
                assert!(t >= 1, "generation indices start at 1");
                let h = head.len() as u64;
                if t <= h {
                    Ok(head[(t - 1) as usize])
                } else {
                    Ok(cycle[((t - h - 1) % cycle.len() as u64) as usize])
                }
            }
            ApproxView::Bounded(s) => s.value_at(t),
        }
    }
}
