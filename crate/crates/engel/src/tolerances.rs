//! Default numeric tolerances, collected in one place.
//!
//! Every constant documents where its magnitude comes from so that a change
//! here is a conscious decision, not a drive-by edit. All tolerances are
//! also carried by [`Tolerances`], which library entry points accept, so
//! callers can tighten or relax them uniformly.

/// Exact algebraic identities (bracket bilinearity, closed-form flows,
/// group associativity). These hold to rounding error; `1e-12` leaves two
/// to three orders of headroom over accumulated f64 rounding on inputs of
/// moderate size (|coordinates| up to a few units).
pub const ALGEBRAIC: f64 = 1e-12;

/// Agreement between closed-form flows and a fourth-order Runge-Kutta
/// oracle. The flow ODE is polynomial in time, so the integrator is exact
/// up to rounding; `1e-9` (relative, floored at magnitude 1) absorbs the
/// rounding of a few hundred oracle steps on coordinates up to ~1e5.
pub const ODE_ORACLE: f64 = 1e-9;

/// Residual threshold for the pointwise differential inequality
/// `(d3 G)^2 + 2 d4 G <= 0`. Richardson-extrapolated central differences
/// on smooth graphs leave O(h^4) truncation ~1e-10 at the default step;
/// `1e-8` adds margin for rounding amplification near small `x4`.
pub const PDI: f64 = 1e-8;

/// Default finite-difference spacing for pointwise derivatives. Small
/// enough that fourth-order truncation is negligible, large enough that
/// `eps / h` rounding stays below [`PDI`].
pub const FD_STEP: f64 = 1e-3;

/// Slack added to the distributional inequality `I3^2 <= 2 I4` to absorb
/// tensor Gauss-Legendre quadrature error on polynomial bumps (order 32 on
/// the bump's bounding box resolves the C^3 integrand to well below this).
pub const QUADRATURE: f64 = 1e-6;

/// Bisection convergence width for crossing times along flow lines.
pub const BISECTION: f64 = 1e-10;

/// How close `|p2 - G(p3, p4)|` must be for a point to count as lying on
/// the boundary of a calibrated set. Boundary points produced by the
/// crate's own bisection are within [`BISECTION`]; external callers get
/// three orders of slack.
pub const BOUNDARY: f64 = 1e-6;

/// Bisection bracket half-width used when no bracket is supplied. Crossing
/// times of interest in this crate are O(1); `1e6` makes runaway searches
/// terminate while still classifying genuinely one-sided fibers as +/-inf.
pub const DEFAULT_BRACKET: f64 = 1e6;

/// Bundle of the tolerances above; entry points that need several of them
/// take this struct so call sites stay readable.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub algebraic: f64,
    pub ode_oracle: f64,
    pub pdi: f64,
    pub fd_step: f64,
    pub quadrature: f64,
    pub bisection: f64,
    pub boundary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: ALGEBRAIC,
            ode_oracle: ODE_ORACLE,
            pdi: PDI,
            fd_step: FD_STEP,
            quadrature: QUADRATURE,
            bisection: BISECTION,
            boundary: BOUNDARY,
        }
    }
}
