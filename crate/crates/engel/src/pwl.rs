//! Piecewise-linear scalar functions given by breakpoint tables.
//!
//! These are the serializable building blocks for the graph-function
//! families: a sorted list of `(x, y)` breakpoints, linear between
//! consecutive breakpoints and constant beyond the ends. A *repeated* `x`
//! with two different `y` values encodes a jump; evaluation at the jump
//! abscissa returns the larger one-sided value, which makes every table
//! upper semi-continuous regardless of jump direction.

use crate::{Error, Result};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct PiecewiseLinear {
    /// Breakpoints sorted by `x`; at most two share an `x`.
    points: Vec<(f64, f64)>,
}

/// A jump of a piecewise-linear table: at `x` the one-sided limits differ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PwlJump {
    pub x: f64,
    /// Limit from the left.
    pub left: f64,
    /// Limit from the right.
    pub right: f64,
}

impl PiecewiseLinear {
    /// Build from breakpoints. They are sorted by `x`; more than two
    /// entries with the same `x`, or non-finite entries, are rejected.
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter(
                "piecewise-linear table needs at least one breakpoint".into(),
            ));
        }
        for &(x, y) in &points {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite breakpoint ({x}, {y})"
                )));
            }
        }
        points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in points.windows(3) {
            if w[0].0 == w[1].0 && w[1].0 == w[2].0 {
                return Err(Error::InvalidParameter(format!(
                    "more than two breakpoints share x = {}",
                    w[0].0
                )));
            }
        }
        Ok(PiecewiseLinear { points })
    }

    /// Constant function.
    pub fn constant(y: f64) -> Self {
        PiecewiseLinear::new(vec![(0.0, y)]).expect("constant table is valid")
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Evaluate: linear interpolation inside, constant extension outside,
    /// and the larger one-sided value exactly at a jump abscissa (upper
    /// semi-continuous by construction).
    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.points;
        let n = pts.len();
        if x <= pts[0].0 {
            // At a leading jump abscissa the u.s.c. value still applies.
            if x == pts[0].0 && n > 1 && pts[1].0 == x {
                return pts[0].1.max(pts[1].1);
            }
            return pts[0].1;
        }
        if x >= pts[n - 1].0 {
            if x == pts[n - 1].0 && n > 1 && pts[n - 2].0 == x {
                return pts[n - 1].1.max(pts[n - 2].1);
            }
            return pts[n - 1].1;
        }
        // Binary search for the segment containing x.
        let mut lo = 0;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if pts[mid].0 <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (x0, y0) = pts[lo];
        let (x1, y1) = pts[hi];
        if x == x0 {
            // Exactly on a breakpoint; if it is a jump, take the u.s.c. value.
            if lo > 0 && pts[lo - 1].0 == x0 {
                return y0.max(pts[lo - 1].1);
            }
            return y0;
        }
        if x1 == x0 {
            // Jump segment with x strictly between neighbors cannot happen
            // (x == x0 handled above), but guard against division by zero.
            return y0.max(y1);
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// One-sided limit from the left at `x`.
    pub fn left_limit(&self, x: f64) -> f64 {
        let pts = &self.points;
        let prev = match pts.iter().rev().find(|&&(px, _)| px < x) {
            Some(&p) => p,
            // Constant extension left of the first breakpoint; at a leading
            // jump the first-listed value is the left limit.
            None => return pts[0].1,
        };
        match pts.iter().find(|&&(px, _)| px >= x) {
            // Approaching a breakpoint at x from the left follows the
            // segment ending at the first entry listed at x.
            Some(&(nx, ny)) if nx == x => ny,
            Some(&(nx, ny)) => prev.1 + (ny - prev.1) * (x - prev.0) / (nx - prev.0),
            None => prev.1,
        }
    }

    /// One-sided limit from the right at `x`.
    pub fn right_limit(&self, x: f64) -> f64 {
        let pts = &self.points;
        let next = match pts.iter().find(|&&(px, _)| px > x) {
            Some(&p) => p,
            None => return pts[pts.len() - 1].1,
        };
        match pts.iter().rev().find(|&&(px, _)| px <= x) {
            // The entry governing the right side of x is the last one
            // listed at x (the second value of a jump), if any.
            Some(&(bx, by)) if bx == x => by,
            Some(&(bx, by)) => by + (next.1 - by) * (x - bx) / (next.0 - bx),
            None => next.1,
        }
    }

    /// All jumps (repeated abscissas with distinct values).
    pub fn jumps(&self) -> Vec<PwlJump> {
        let mut out = Vec::new();
        for w in self.points.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
                out.push(PwlJump {
                    x: w[0].0,
                    left: w[0].1,
                    right: w[1].1,
                });
            }
        }
        out
    }

    /// True if the table never increases (segment slopes <= 0 and jumps
    /// go downward). Exact breakpoint analysis, no sampling.
    pub fn is_non_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 <= w[0].1)
    }

    /// True if the table never decreases.
    pub fn is_non_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 >= w[0].1)
    }

    /// Largest absolute segment slope. Infinite if the table jumps.
    pub fn lipschitz_constant(&self) -> f64 {
        let mut l: f64 = 0.0;
        for w in self.points.windows(2) {
            let dx = w[1].0 - w[0].0;
            let dy = (w[1].1 - w[0].1).abs();
            if dx == 0.0 {
                if dy > 0.0 {
                    return f64::INFINITY;
                }
            } else {
                l = l.max(dy / dx);
            }
        }
        l
    }
}
