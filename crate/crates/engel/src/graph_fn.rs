//! Extended-real graph functions `G(x3, x4)` with declared discontinuity
//! structure.
//!
//! A calibrated set is the region `x2 > G(x3, x4)` above such a graph. The
//! graph carries three pieces of declared structure that the validators
//! consume:
//!
//! * the evaluation map itself (extended-real valued),
//! * a list of *declared* jump segments — jumps are declared by the
//!   constructor of the set, not detected by sampling,
//! * the boundary level `b` such that the closure of `{G = -inf}` is the
//!   upper half-plane `{x4 >= b}` (`PosInf` means the `-inf` region is
//!   empty; `NegInf` would mean the graph is identically `-inf`).

use crate::extreal::ExtReal;
use serde::Serialize;
use std::sync::Arc;

/// Orientation of the line carrying a jump segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SegmentAxis {
    /// The segment lies in a line `{x4 = level}` (parallel to the x3 axis).
    /// This is the only orientation compatible with calibrated sets.
    ConstX4,
    /// The segment lies in a line `{x3 = level}`. Declarable so that the
    /// jump-condition validator has something meaningful to reject.
    ConstX3,
}

/// A maximal open interval in an axis-parallel line across which the graph
/// function jumps, together with its one-sided values. `value_below` is
/// the limit approaching from the smaller-level side (`x4 < level` for
/// [`SegmentAxis::ConstX4`]), `value_above` from the larger-level side.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct JumpSegment {
    pub axis: SegmentAxis,
    pub level: f64,
    /// Open interval `(lo, hi)` in the free coordinate; may be infinite.
    pub lo: f64,
    pub hi: f64,
    pub value_below: f64,
    pub value_above: f64,
}

impl JumpSegment {
    /// A jump across the full line `{x4 = level}`.
    pub fn full_line_x4(level: f64, value_below: f64, value_above: f64) -> Self {
        JumpSegment {
            axis: SegmentAxis::ConstX4,
            level,
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            value_below,
            value_above,
        }
    }

    /// Does the segment meet the closed rectangle
    /// `[x3_lo, x3_hi] x [x4_lo, x4_hi]`?
    pub fn intersects_region(&self, x3_lo: f64, x3_hi: f64, x4_lo: f64, x4_hi: f64) -> bool {
        match self.axis {
            SegmentAxis::ConstX4 => {
                self.level >= x4_lo && self.level <= x4_hi && self.lo < x3_hi && self.hi > x3_lo
            }
            SegmentAxis::ConstX3 => {
                self.level >= x3_lo && self.level <= x3_hi && self.lo < x4_hi && self.hi > x4_lo
            }
        }
    }
}

/// An extended-real function of `(x3, x4)` with declared jump segments and
/// declared `-inf` boundary level.
#[derive(Clone)]
pub struct GraphFunction {
    eval: Arc<dyn Fn(f64, f64) -> ExtReal + Send + Sync>,
    jump_segments: Vec<JumpSegment>,
    /// `b` with `closure({G = -inf}) = {x4 >= b}`; `PosInf` if empty.
    neg_inf_boundary: ExtReal,
}

impl std::fmt::Debug for GraphFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GraphFunction")
            .field("jump_segments", &self.jump_segments)
            .field("neg_inf_boundary", &self.neg_inf_boundary)
            .finish_non_exhaustive()
    }
}

impl GraphFunction {
    pub fn new(
        eval: impl Fn(f64, f64) -> ExtReal + Send + Sync + 'static,
        jump_segments: Vec<JumpSegment>,
        neg_inf_boundary: ExtReal,
    ) -> Self {
        GraphFunction {
            eval: Arc::new(eval),
            jump_segments,
            neg_inf_boundary,
        }
    }

    /// A finite-valued graph with no declared jumps.
    pub fn smooth(eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        GraphFunction::new(
            move |x3, x4| ExtReal::from_f64(eval(x3, x4)),
            Vec::new(),
            ExtReal::PosInf,
        )
    }

    /// An extended-real-valued graph with no declared jumps and no
    /// bottomless region announced. Callers handing in a profile that does
    /// reach `-inf` should use [`GraphFunction::new`] and declare where.
    pub fn smooth_ext(eval: impl Fn(f64, f64) -> ExtReal + Send + Sync + 'static) -> Self {
        GraphFunction::new(eval, Vec::new(), ExtReal::PosInf)
    }

    pub fn eval(&self, x3: f64, x4: f64) -> ExtReal {
        (self.eval)(x3, x4)
    }

    /// Evaluate expecting a finite value; `None` on `+/-inf`.
    pub fn eval_finite(&self, x3: f64, x4: f64) -> Option<f64> {
        self.eval(x3, x4).finite()
    }

    pub fn jump_segments(&self) -> &[JumpSegment] {
        &self.jump_segments
    }

    pub fn neg_inf_boundary(&self) -> ExtReal {
        self.neg_inf_boundary
    }

    /// Sample-based upper semi-continuity check at one point: the value
    /// must dominate values at nearby sample points up to a modulus read
    /// off from shrinking rings. Returns the worst violation margin
    /// (positive = violation) over the given probe radii.
    ///
    /// This is a falsifier: it can only ever certify the probes tried.
    pub fn usc_violation(&self, x3: f64, x4: f64, radii: &[f64], probes_per_ring: usize) -> f64 {
        let center = self.eval(x3, x4);
        let mut worst: f64 = f64::NEG_INFINITY;
        // limsup_{y -> x} G(y) <= G(x): approximate the limsup by the max
        // over the *smallest* ring; larger radii only inform the trend.
        let r = match radii.iter().copied().reduce(f64::min) {
            Some(r) => r,
            None => return 0.0,
        };
        for k in 0..probes_per_ring {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (probes_per_ring as f64);
            let probe = self.eval(x3 + r * theta.cos(), x4 + r * theta.sin());
            let margin = match (probe, center) {
                (ExtReal::PosInf, ExtReal::PosInf) => 0.0,
                (ExtReal::PosInf, _) => f64::INFINITY,
                (_, ExtReal::PosInf) => f64::NEG_INFINITY,
                (ExtReal::NegInf, _) => f64::NEG_INFINITY,
                (ExtReal::Finite(p), ExtReal::NegInf) => {
                    if p > f64::NEG_INFINITY {
                        f64::INFINITY
                    } else {
                        0.0
                    }
                }
                (ExtReal::Finite(p), ExtReal::Finite(c)) => p - c,
            };
            worst = worst.max(margin);
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_constructor_has_no_structure() {
        let g = GraphFunction::smooth(|x3, x4| x3 + x4);
        assert_eq!(g.eval(1.0, 2.0), ExtReal::Finite(3.0));
        assert!(g.jump_segments().is_empty());
        assert_eq!(g.neg_inf_boundary(), ExtReal::PosInf);
    }

    #[test]
    fn jump_segment_region_intersection() {
        let seg = JumpSegment {
            axis: SegmentAxis::ConstX4,
            level: 1.0,
            lo: -1.0,
            hi: 1.0,
            value_below: 2.0,
            value_above: 0.0,
        };
        assert!(seg.intersects_region(-2.0, 2.0, 0.0, 2.0));
        assert!(!seg.intersects_region(-2.0, 2.0, 1.5, 2.0)); // level outside
        assert!(!seg.intersects_region(2.0, 3.0, 0.0, 2.0)); // interval outside

        let vertical = JumpSegment {
            axis: SegmentAxis::ConstX3,
            level: 0.0,
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            value_below: 0.0,
            value_above: 1.0,
        };
        assert!(vertical.intersects_region(-1.0, 1.0, -1.0, 1.0));
        assert!(!vertical.intersects_region(0.5, 1.0, -1.0, 1.0));
    }

    #[test]
    fn usc_falsifier_flags_lower_semicontinuous_steps() {
        // Lower semi-continuous step: value 0 at the jump, 1 to the left.
        let bad = GraphFunction::new(
            |_x3, x4| {
                if x4 < 0.0 {
                    ExtReal::Finite(1.0)
                } else {
                    ExtReal::Finite(0.0)
                }
            },
            vec![JumpSegment::full_line_x4(0.0, 1.0, 0.0)],
            ExtReal::PosInf,
        );
        let v = bad.usc_violation(0.0, 0.0, &[1e-3], 16);
        assert!(v > 0.5, "expected a near-1 violation, got {v}");

        // The u.s.c. version takes the larger value at the jump.
        let good = GraphFunction::new(
            |_x3, x4| {
                if x4 <= 0.0 {
                    ExtReal::Finite(1.0)
                } else {
                    ExtReal::Finite(0.0)
                }
            },
            vec![JumpSegment::full_line_x4(0.0, 1.0, 0.0)],
            ExtReal::PosInf,
        );
        let v = good.usc_violation(0.0, 0.0, &[1e-3], 16);
        assert!(v <= 1e-9, "unexpected violation {v}");
    }
}
