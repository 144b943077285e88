//! Extended real values for graph functions.
//!
//! Graph functions of calibrated sets genuinely take the values `-inf`
//! (the set contains the whole vertical fiber) and `+inf` (the fiber is
//! empty), so a three-state value is part of the domain model rather than
//! an encoding trick. `Finite` always holds a finite f64; constructors
//! route non-finite floats into the infinite variants.

use serde::Serialize;

/// A value in `[-inf, +inf]`. The derived ordering is the natural one:
/// `NegInf < Finite(a) < Finite(b) < PosInf` whenever `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    /// Classify an f64, mapping `+/-inf` to the infinite variants.
    /// NaN is rejected by the caller's contract; debug builds assert.
    pub fn from_f64(v: f64) -> ExtReal {
        debug_assert!(!v.is_nan(), "ExtReal::from_f64 given NaN");
        if v == f64::INFINITY {
            ExtReal::PosInf
        } else if v == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(v)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// The finite payload, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Collapse to f64, sending the infinite variants to `+/-inf`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    /// Strict comparison against a finite float: `self < rhs`.
    pub fn lt(self, rhs: f64) -> bool {
        match self {
            ExtReal::NegInf => true,
            ExtReal::Finite(v) => v < rhs,
            ExtReal::PosInf => false,
        }
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "inf"),
        }
    }
}
