//! The calibrated-set families: constructible sets with constant
//! horizontal normal `X2`, each presented as the region above an
//! extended-real graph, `E = {x2 > G(x3, x4)}`.
//!
//! Convention used throughout the crate: the set is the *upper* graph and
//! the profile functions are oriented accordingly — `MonotoneG` carries a
//! non-increasing `g`, and the `Fgk` family combines a non-decreasing `f`
//! with a non-increasing `g`. (The mirrored convention `{x2 + g > 0}` with
//! non-decreasing `g` describes the same sets; this crate standardizes on
//! the upper-graph form.)

use crate::extreal::ExtReal;
use crate::graph_fn::{GraphFunction, JumpSegment, SegmentAxis};
use crate::point::Point;
use crate::pwl::PiecewiseLinear;
use crate::report::ValidationReport;
use crate::{Error, Result};

/// Which coordinate half-spaces are calibrated: `{x2 > c}` (the graph is
/// the constant `c`) and `{x4 > c}` (the graph is a `+/-inf` step, since
/// `x4` can only increase along `X2` flows).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfSpaceAxis {
    X2,
    X4,
}

/// A line across which a graph fails to be C¹ while staying continuous
/// (or, for the `x4` half-space, the infinite step). Pointwise finite
/// differences must not straddle such a line; piecewise quadrature splits
/// there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KinkLine {
    /// Non-smooth along `{x4 = level}`.
    ConstX4 { level: f64 },
    /// Non-smooth along `{k*x3 - x4 = u}`.
    Oblique { k: f64, u: f64 },
}

/// A constructible set with constant horizontal normal `X2`.
#[derive(Clone, Debug)]
pub enum CalibratedSetSpec {
    /// `{axis coordinate > offset}`.
    HalfSpace { axis: HalfSpaceAxis, offset: f64 },
    /// `{x2 > g(x4)}` for a non-increasing upper semi-continuous `g`.
    MonotoneG { g: PiecewiseLinear },
    /// `{x2 > f(k x3 - x4) + g(x4)}` with `f` non-decreasing and
    /// Lipschitz with constant at most `2/k^2`, and `g` non-increasing.
    Fgk {
        f: PiecewiseLinear,
        g: PiecewiseLinear,
        k: f64,
    },
    /// The extremal cone `{x2 > 0, x4 > 0, x2 > x3^2 / (2 x4)}`: the
    /// smallest calibrated set (up to closure) containing the origin on
    /// its boundary. Its graph is `+inf` for `x4 <= 0` and
    /// `x3^2 / (2 x4)` for `x4 > 0`.
    Cone,
    /// An arbitrary caller-supplied graph. Whether it actually describes
    /// a calibrated set is exactly what the validators are for.
    CustomG { graph: GraphFunction },
}

impl CalibratedSetSpec {
    pub fn cone() -> Self {
        CalibratedSetSpec::Cone
    }

    pub fn half_space(axis: HalfSpaceAxis, offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::InvalidParameter("half-space offset must be finite".into()));
        }
        Ok(CalibratedSetSpec::HalfSpace { axis, offset })
    }

    pub fn monotone_g(g: PiecewiseLinear) -> Self {
        CalibratedSetSpec::MonotoneG { g }
    }

    pub fn fgk(f: PiecewiseLinear, g: PiecewiseLinear, k: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "fgk parameter k must be finite and positive, got {k}"
            )));
        }
        Ok(CalibratedSetSpec::Fgk { f, g, k })
    }

    pub fn custom(graph: GraphFunction) -> Self {
        CalibratedSetSpec::CustomG { graph }
    }

    /// The graph value `G(x3, x4)`. This is the single source of truth
    /// for membership; [`Self::contains`] compares against it.
    pub fn eval_graph(&self, x3: f64, x4: f64) -> ExtReal {
        match self {
            CalibratedSetSpec::HalfSpace { axis: HalfSpaceAxis::X2, offset } => {
                ExtReal::Finite(*offset)
            }
            CalibratedSetSpec::HalfSpace { axis: HalfSpaceAxis::X4, offset } => {
                if x4 > *offset {
                    ExtReal::NegInf
                } else {
                    ExtReal::PosInf
                }
            }
            CalibratedSetSpec::MonotoneG { g } => ExtReal::Finite(g.eval(x4)),
            CalibratedSetSpec::Fgk { f, g, k } => {
                ExtReal::Finite(f.eval(k * x3 - x4) + g.eval(x4))
            }
            CalibratedSetSpec::Cone => {
                if x4 > 0.0 {
                    ExtReal::Finite(x3 * x3 / (2.0 * x4))
                } else {
                    ExtReal::PosInf
                }
            }
            CalibratedSetSpec::CustomG { graph } => graph.eval(x3, x4),
        }
    }

    /// Membership in the open set `{x2 > G(x3, x4)}`. Independent of `x1`
    /// by construction (the `X1`-invariance of calibrated sets).
    pub fn contains(&self, p: Point) -> bool {
        self.eval_graph(p.x3, p.x4).lt(p.x2)
    }

    /// Package the graph with its declared structure (jump segments and
    /// the `-inf` boundary level).
    ///
    /// For the `Fgk` family with a jumping `g`, the recorded one-sided
    /// values are those of the `x4`-profile part `g`; the continuous
    /// `f`-part offsets both sides equally along the segment, so the jump
    /// *difference* recorded this way is exact everywhere on the segment.
    pub fn graph(&self) -> GraphFunction {
        let spec = self.clone();
        let eval = move |x3: f64, x4: f64| spec.eval_graph(x3, x4);
        let jumps = self.declared_jumps();
        let b = self.neg_inf_boundary();
        GraphFunction::new(eval, jumps, b)
    }

    fn declared_jumps(&self) -> Vec<JumpSegment> {
        match self {
            CalibratedSetSpec::MonotoneG { g } | CalibratedSetSpec::Fgk { g, .. } => g
                .jumps()
                .iter()
                .map(|j| JumpSegment::full_line_x4(j.x, j.left, j.right))
                .collect(),
            CalibratedSetSpec::CustomG { graph } => graph.jump_segments().to_vec(),
            _ => Vec::new(),
        }
    }

    fn neg_inf_boundary(&self) -> ExtReal {
        match self {
            CalibratedSetSpec::HalfSpace { axis: HalfSpaceAxis::X4, offset } => {
                ExtReal::Finite(*offset)
            }
            CalibratedSetSpec::CustomG { graph } => graph.neg_inf_boundary(),
            _ => ExtReal::PosInf,
        }
    }

    /// Lines where the graph is continuous but possibly not
    /// differentiable: profile breakpoints of the piecewise-linear
    /// families (including their declared jumps), and the infinite step of
    /// the `x4` half-space. The cone is smooth wherever finite, and a
    /// custom graph's smoothness is the caller's claim, so both yield an
    /// empty list.
    pub fn kink_lines(&self) -> Vec<KinkLine> {
        match self {
            CalibratedSetSpec::HalfSpace { axis: HalfSpaceAxis::X2, .. } => Vec::new(),
            CalibratedSetSpec::HalfSpace { axis: HalfSpaceAxis::X4, offset } => {
                vec![KinkLine::ConstX4 { level: *offset }]
            }
            CalibratedSetSpec::MonotoneG { g } => profile_kink_xs(g)
                .into_iter()
                .map(|x| KinkLine::ConstX4 { level: x })
                .collect(),
            CalibratedSetSpec::Fgk { f, g, k } => {
                let mut lines: Vec<KinkLine> = profile_kink_xs(f)
                    .into_iter()
                    .map(|u| KinkLine::Oblique { k: *k, u })
                    .collect();
                lines.extend(
                    profile_kink_xs(g)
                        .into_iter()
                        .map(|x| KinkLine::ConstX4 { level: x }),
                );
                lines
            }
            CalibratedSetSpec::Cone => Vec::new(),
            CalibratedSetSpec::CustomG { .. } => Vec::new(),
        }
    }

    /// One-line description for reports.
    pub fn describe(&self) -> String {
        match self {
            CalibratedSetSpec::HalfSpace { axis, offset } => format!(
                "half-space {{{} > {offset}}}",
                match axis {
                    HalfSpaceAxis::X2 => "x2",
                    HalfSpaceAxis::X4 => "x4",
                }
            ),
            CalibratedSetSpec::MonotoneG { g } => {
                format!("monotone profile ({} breakpoints)", g.breakpoints().len())
            }
            CalibratedSetSpec::Fgk { f, g, k } => format!(
                "fgk family (k = {k}, f: {} breakpoints, g: {} breakpoints)",
                f.breakpoints().len(),
                g.breakpoints().len()
            ),
            CalibratedSetSpec::Cone => "extremal cone".into(),
            CalibratedSetSpec::CustomG { .. } => "custom graph".into(),
        }
    }

    /// Structural (per-family) invariant checks that need no group
    /// sampling: profile monotonicity, Lipschitz budgets, declared-jump
    /// orientation, `-inf` level-set consistency. Sampling-based checks
    /// live in [`crate::monotone`] and [`crate::pdi`].
    pub fn validate_invariants(&self) -> ValidationReport {
        let mut rep = ValidationReport::new("family_invariants");
        match self {
            CalibratedSetSpec::HalfSpace { offset, .. } => {
                rep.samples = 1;
                if !offset.is_finite() {
                    rep.violation(vec![*offset], *offset, 0.0, "offset must be finite");
                }
            }
            CalibratedSetSpec::MonotoneG { g } => {
                rep.samples = g.breakpoints().len();
                if !g.is_non_increasing() {
                    let w = first_increase(g);
                    rep.violation(vec![w.0, w.1], w.1, w.0, "profile g must be non-increasing");
                }
            }
            CalibratedSetSpec::Fgk { f, g, k } => {
                rep.samples = f.breakpoints().len() + g.breakpoints().len();
                if !f.is_non_decreasing() {
                    rep.violation(vec![], 0.0, 0.0, "profile f must be non-decreasing");
                }
                let budget = 2.0 / (k * k);
                let lip = f.lipschitz_constant();
                rep.observe(lip);
                if lip > budget {
                    rep.violation(
                        vec![*k],
                        lip,
                        budget,
                        "f exceeds the Lipschitz budget 2/k^2",
                    );
                }
                if !g.is_non_increasing() {
                    rep.violation(vec![], 0.0, 0.0, "profile g must be non-increasing");
                }
            }
            CalibratedSetSpec::Cone => {
                rep.samples = 1;
            }
            CalibratedSetSpec::CustomG { graph } => {
                // Sample-based u.s.c. probe on a coarse default grid plus
                // consistency of the -inf region with the declared level.
                let b = graph.neg_inf_boundary();
                let grid: Vec<f64> = (-8..=8).map(|i| i as f64 / 2.0).collect();
                rep.samples = grid.len() * grid.len();
                for &x3 in &grid {
                    for &x4 in &grid {
                        let v = graph.usc_violation(x3, x4, &[1e-4], 8);
                        if v > 1e-7 {
                            rep.violation(
                                vec![x3, x4],
                                v,
                                1e-7,
                                "graph is not upper semi-continuous here",
                            );
                        }
                        let val = graph.eval(x3, x4);
                        match b {
                            ExtReal::Finite(bv) => {
                                if x4 > bv && val != ExtReal::NegInf {
                                    rep.violation(
                                        vec![x3, x4],
                                        val.to_f64(),
                                        f64::NEG_INFINITY,
                                        "declared -inf half-plane contains a finite value",
                                    );
                                }
                                if val == ExtReal::NegInf && x4 < bv {
                                    rep.violation(
                                        vec![x3, x4],
                                        x4,
                                        bv,
                                        "-inf value below the declared boundary level",
                                    );
                                }
                            }
                            ExtReal::PosInf => {
                                if val == ExtReal::NegInf {
                                    rep.violation(
                                        vec![x3, x4],
                                        f64::NEG_INFINITY,
                                        0.0,
                                        "-inf value but no -inf region declared",
                                    );
                                }
                            }
                            ExtReal::NegInf => {
                                if val != ExtReal::NegInf {
                                    rep.violation(
                                        vec![x3, x4],
                                        val.to_f64(),
                                        f64::NEG_INFINITY,
                                        "graph declared identically -inf has another value",
                                    );
                                }
                            }
                        }
                    }
                }
                for seg in graph.jump_segments() {
                    if seg.axis == SegmentAxis::ConstX3 {
                        rep.violation(
                            vec![seg.level],
                            0.0,
                            0.0,
                            "declared jump segment is not parallel to the x3 axis",
                        );
                    }
                }
            }
        }
        rep.truncate_violations(16);
        rep
    }

    /// Draw a random admissible non-parametric family member: a slope
    /// parameter `k` in `[0.6, 2.5]`, a non-decreasing piecewise-linear
    /// profile whose slopes stay at or below 90% of the budget `2/k^2`
    /// (the 10% headroom keeps floating-point slack out of the monotone
    /// checks), and a non-increasing continuous height profile.
    pub fn sample_fgk(rng: &mut impl rand::Rng) -> Self {
        let k: f64 = rng.random_range(0.6..=2.5);
        let cap = 0.9 * 2.0 / (k * k);
        let f = random_pwl(rng, (-12.0, 12.0), 0.0, cap, 5);
        let g = random_pwl(rng, (-1.0, 5.0), -1.2, 0.0, 5);
        CalibratedSetSpec::Fgk { f, g, k }
    }

    /// Draw a family member that deliberately violates the slope budget:
    /// the profile climbs at twice the admissible rate over a wide window.
    /// The height profile is constant so the slope excess is the only
    /// effect in play and every check that should fail does fail
    /// (a steeply decreasing height profile could otherwise mask the
    /// excess in the differential inequality).
    pub fn sample_fgk_invalid(rng: &mut impl rand::Rng) -> Self {
        let k: f64 = rng.random_range(0.6..=2.5);
        let s = 4.0 / (k * k);
        let f = PiecewiseLinear::new(vec![(-100.0, -100.0 * s), (100.0, 100.0 * s)])
            .expect("two distinct points form a valid profile");
        let g = PiecewiseLinear::constant(rng.random_range(-1.0..=1.0));
        CalibratedSetSpec::Fgk { f, g, k }
    }
}

/// Continuous piecewise-linear profile over `range` with 1..=max_segments
/// pieces, each slope drawn uniformly from `[slope_lo, slope_hi]`.
/// Breakpoint abscissae are kept at least 5% of the range apart so finite
/// differences with small steps can avoid straddling two kinks at once.
fn random_pwl(
    rng: &mut impl rand::Rng,
    range: (f64, f64),
    slope_lo: f64,
    slope_hi: f64,
    max_segments: usize,
) -> PiecewiseLinear {
    let (lo, hi) = range;
    let segments = rng.random_range(1..=max_segments);
    let min_gap = 0.05 * (hi - lo);
    let mut xs = vec![lo];
    for _ in 1..segments {
        let last = *xs.last().expect("xs starts non-empty");
        let upper = hi - min_gap;
        if last + min_gap >= upper {
            break;
        }
        xs.push(rng.random_range((last + min_gap)..=upper));
    }
    xs.push(hi);
    let mut points = Vec::with_capacity(xs.len());
    let mut value = rng.random_range(-1.0..=1.0);
    points.push((xs[0], value));
    for w in xs.windows(2) {
        let slope = rng.random_range(slope_lo..=slope_hi);
        value += slope * (w[1] - w[0]);
        points.push((w[1], value));
    }
    PiecewiseLinear::new(points).expect("strictly increasing abscissae")
}

/// Abscissae where the profile genuinely fails to be differentiable: the
/// slope changes across the breakpoint (treating the constant extension
/// beyond the table as slope zero) or two table entries stack a jump
/// there. A breakpoint that merely subdivides a straight segment is not a
/// kink, so a constant profile reports none.
fn profile_kink_xs(p: &PiecewiseLinear) -> Vec<f64> {
    let pts = p.breakpoints();
    let mut xs: Vec<f64> = pts.iter().map(|&(x, _)| x).collect();
    xs.dedup();
    let slope = |a: (f64, f64), b: (f64, f64)| (b.1 - a.1) / (b.0 - a.0);
    let mut out = Vec::new();
    for &x in &xs {
        let here: Vec<(f64, f64)> = pts.iter().copied().filter(|&(px, _)| px == x).collect();
        let first = *here.first().expect("x came from the table");
        let last = *here.last().expect("x came from the table");
        let jumps = here.len() > 1 && first.1 != last.1;
        let left = pts.iter().rev().find(|&&(px, _)| px < x).copied();
        let right = pts.iter().find(|&&(px, _)| px > x).copied();
        let slope_left = left.map_or(0.0, |l| slope(l, first));
        let slope_right = right.map_or(0.0, |r| slope(last, r));
        if jumps || slope_left != slope_right {
            out.push(x);
        }
    }
    out
}

fn first_increase(g: &PiecewiseLinear) -> (f64, f64) {
    for w in g.breakpoints().windows(2) {
        if w[1].1 > w[0].1 {
            return (w[0].0, w[1].0);
        }
    }
    (f64::NAN, f64::NAN)
}
