//! Computational sub-Riemannian geometry of the Engel group.
//!
//! The Engel group is the four-dimensional step-3 Carnot group whose Lie
//! algebra is spanned by `X1..X4` with the only nonzero brackets
//! `[X1, X2] = X3` and `[X1, X3] = X4`. This crate works in exponential
//! coordinates of the second kind, where the point `(x1, x2, x3, x4)`
//! stands for `exp(x4 X4) exp(x3 X3) exp(x2 X2) exp(x1 X1)` and every
//! horizontal flow has a polynomial closed form.
//!
//! On top of the group arithmetic the crate studies *calibrated sets*:
//! open sets that are invariant under the `X1` flow and monotone under the
//! `X2` flow (sets with constant horizontal normal `X2`). Such a set is the
//! region above a graph `x2 > G(x3, x4)` and the crate provides
//!
//! * validators for the defining monotonicity properties and for the
//!   derived family of monotone directions ([`monotone`]),
//! * the pointwise and distributional partial-differential inequality that
//!   characterizes the graphs `G` of calibrated sets ([`pdi`]),
//! * intrinsic-graph extraction along horizontal directions, including the
//!   explicit extremal cone whose graph map is continuous but not
//!   Lipschitz, with its exact `1/3`-power blow-up ([`intrinsic`]),
//! * Euclidean-cone avoidance of the boundary and extraction of an entire
//!   Lipschitz graph in a rotated direction ([`rectify`]),
//! * the analogous computations in filiform groups of arbitrary step,
//!   where adjoint orbits of a single horizontal direction span a
//!   Vandermonde frame ([`filiform`]).
//!
//! Every validator is a *falsifier*: it searches finite samples for
//! counterexamples and returns a [`report::ValidationReport`] listing
//! witnesses. A passing report certifies only the samples checked, never
//! the full continuum statement.
//!
//! Each major capability has a runnable tour under `examples/`; see the
//! repository README for the list. The `engel` binary exposes the same
//! functionality behind `validate`, `graph`, `analyze`, `filiform`, and
//! `demo` subcommands.

pub mod algebra;
pub mod config;
pub mod extreal;
pub mod filiform;
pub mod graph_fn;
pub mod intrinsic;
pub mod monotone;
pub mod pdi;
pub mod point;
pub mod pwl;
pub mod quadrature;
pub mod quartic;
pub mod rectify;
pub mod report;
pub mod runner;
pub mod sampler;
pub mod sets;
pub mod tolerances;

pub use algebra::{adjoint_exp, bracket, normalize_normal, BasisChange, TangentVector};
pub use extreal::ExtReal;
pub use graph_fn::{GraphFunction, JumpSegment, SegmentAxis};
pub use point::{exp_point, flow, inverse, multiply, Point};
pub use pwl::PiecewiseLinear;
pub use report::{ValidationReport, Violation};
pub use sets::CalibratedSetSpec;
pub use tolerances::Tolerances;

/// Errors shared across the crate. Validators do not use these to signal
/// failed checks (failures are data in a [`report::ValidationReport`]);
/// errors mean the requested computation itself is ill-posed.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A finite-difference region overlaps a declared jump segment, so
    /// pointwise derivatives of the graph function are meaningless there.
    #[error("region [{x3_lo}, {x3_hi}] x [{x4_lo}, {x4_hi}] intersects a declared jump segment")]
    RegionContainsJump {
        x3_lo: f64,
        x3_hi: f64,
        x4_lo: f64,
        x4_hi: f64,
    },
    /// The graph function takes an infinite value inside a region that
    /// requires finite values.
    #[error("graph function is infinite at ({x3}, {x4})")]
    RegionContainsInfinite { x3: f64, x4: f64 },
    /// A test bump sticks out of the region where the graph function is
    /// finite, so the distributional pairing is undefined.
    #[error("bump centered at ({x3}, {x4}) with radius {radius} leaves the finite-value region")]
    SupportEscapesDomain { x3: f64, x4: f64, radius: f64 },
    /// Membership along a flow line switched from inside to outside, so no
    /// single crossing time exists.
    #[error(
        "membership along the flow line is not a half-line: inside at t={t_inside}, outside at t={t_outside}"
    )]
    NonMonotoneMembership { t_inside: f64, t_outside: f64 },
    /// The four frame vectors fail to span the tangent space.
    #[error("frame vectors are linearly dependent (det = {det})")]
    DegenerateFrame { det: f64 },
    /// A graphing direction is not strictly inside the admissible cone.
    #[error("direction is outside the admissible cone: {reason}")]
    DirectionOutsideCone { reason: String },
    /// A parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A configuration file could not be parsed or is inconsistent.
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
