//! Points of the Engel group and the closed-form flow calculus.
//!
//! Coordinates are exponential of the second kind: `(x1, x2, x3, x4)`
//! stands for `exp(x4 X4) exp(x3 X3) exp(x2 X2) exp(x1 X1)`. In this chart
//! the left-invariant frame is
//!
//! ```text
//! X1 = d1,  X2 = d2 + x1 d3 + (x1^2/2) d4,  X3 = d3 + x1 d4,  X4 = d4
//! ```
//!
//! and the flow of any constant-coefficient field `v = c1 X1 + .. + c4 X4`
//! integrates the triangular ODE
//!
//! ```text
//! x1' = c1,  x2' = c2,  x3' = c3 + x1 c2,  x4' = c4 + x1 c3 + (x1^2/2) c2
//! ```
//!
//! whose solution is polynomial in time. Because right translation by
//! `exp(t v)` *is* the time-`t` flow, the whole group law follows from
//! four flows.

use crate::algebra::TangentVector;
use serde::Serialize;

/// A group element in exponential coordinates of the second kind.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl Point {
    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Point { x1, x2, x3, x4 }
    }

    pub const ORIGIN: Point = Point::new(0.0, 0.0, 0.0, 0.0);

    pub fn as_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    /// Coordinate-wise (Euclidean) translation. The boundary-cone
    /// containment arguments in this crate are genuinely Euclidean, so
    /// this is a real operation of the domain, not a convenience.
    pub fn translate(self, o: Point) -> Point {
        Point::new(
            self.x1 + o.x1,
            self.x2 + o.x2,
            self.x3 + o.x3,
            self.x4 + o.x4,
        )
    }

    pub fn max_diff(self, o: Point) -> f64 {
        let a = self.as_array();
        let b = o.as_array();
        (0..4).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
    }
}

/// Closed-form time-`t` flow of the left-invariant field with constant
/// coefficients `v`, started at `p`. Exact up to rounding; polynomial of
/// degree 3 in `t`.
///
/// Specializations worth knowing by heart:
/// * `v = X2`: `(p1, p2 + t, p3 + p1 t, p4 + p1^2 t / 2)`
/// * `v = a X1 + X2`: fourth coordinate
///   `p4 + p1^2 t / 2 + a p1 t^2 / 2 + a^2 t^3 / 6`.
pub fn flow(p: Point, v: TangentVector, t: f64) -> Point {
    let (c1, c2, c3, c4) = (v.c1, v.c2, v.c3, v.c4);
    let x1 = p.x1 + c1 * t;
    let x2 = p.x2 + c2 * t;
    let x3 = p.x3 + c3 * t + c2 * (p.x1 * t + c1 * t * t / 2.0);
    let x4 = p.x4
        + c4 * t
        + c3 * (p.x1 * t + c1 * t * t / 2.0)
        + c2 * (p.x1 * p.x1 * t / 2.0 + p.x1 * c1 * t * t / 2.0 + c1 * c1 * t * t * t / 6.0);
    Point::new(x1, x2, x3, x4)
}

/// The group exponential as a point: `exp_point(v) = flow(0, v, 1)`.
pub fn exp_point(v: TangentVector) -> Point {
    flow(Point::ORIGIN, v, 1.0)
}

/// Group multiplication. Writing `q` in its defining factorization and
/// using that right translation by `exp(t X)` is the `X`-flow:
/// `p * q = flow(flow(flow(flow(p, X4, q4), X3, q3), X2, q2), X1, q1)`.
pub fn multiply(p: Point, q: Point) -> Point {
    let s = flow(p, TangentVector::X4, q.x4);
    let s = flow(s, TangentVector::X3, q.x3);
    let s = flow(s, TangentVector::X2, q.x2);
    flow(s, TangentVector::X1, q.x1)
}

/// Group inverse, by reversing the defining factorization:
/// `p^{-1} = exp(-p1 X1) exp(-p2 X2) exp(-p3 X3) exp(-p4 X4)`,
/// accumulated as flows from the identity.
pub fn inverse(p: Point) -> Point {
    let s = flow(Point::ORIGIN, TangentVector::X1, -p.x1);
    let s = flow(s, TangentVector::X2, -p.x2);
    let s = flow(s, TangentVector::X3, -p.x3);
    flow(s, TangentVector::X4, -p.x4)
}

/// Right-hand side of the flow ODE at a point: `sum c_i X_i(x)`.
/// Exposed for oracles and cross-checks.
pub fn field_at(p: Point, v: TangentVector) -> [f64; 4] {
    [
        v.c1,
        v.c2,
        v.c3 + p.x1 * v.c2,
        v.c4 + p.x1 * v.c3 + p.x1 * p.x1 / 2.0 * v.c2,
    ]
}

/// Fixed-step fourth-order Runge-Kutta integration of the flow ODE.
/// The right-hand side is polynomial of degree <= 2 in time along
/// trajectories, so this integrator is *exact* up to rounding for any
/// step count; it exists as an independent oracle for [`flow`].
pub fn rk4_flow(p: Point, v: TangentVector, t: f64, steps: usize) -> Point {
    assert!(steps > 0);
    let h = t / steps as f64;
    let mut y = p.as_array();
    let add = |a: [f64; 4], b: [f64; 4], s: f64| {
        [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2], a[3] + s * b[3]]
    };
    let f = |y: [f64; 4]| field_at(Point::new(y[0], y[1], y[2], y[3]), v);
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f(add(y, k1, h / 2.0));
        let k3 = f(add(y, k2, h / 2.0));
        let k4 = f(add(y, k3, h));
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Point::new(y[0], y[1], y[2], y[3])
}
