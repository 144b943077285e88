//! Monotonicity validators for candidate calibrated sets.
//!
//! Every check here is a falsifier: it searches for witnesses that the
//! claimed invariance or monotonicity fails, and reports the worst
//! margin found. A passing report is evidence, not proof — the guarantees
//! come from the construction of [`CalibratedSetSpec`](crate::sets::CalibratedSetSpec);
//! these routines exist to catch mistakes in custom specs and in our own
//! constructors.

use crate::algebra::{adjoint_exp, TangentVector};
use crate::extreal::ExtReal;
use crate::point::{flow, Point};
use crate::report::ValidationReport;
use crate::sampler::{seeded_rng, SampleSpace};
use crate::sets::CalibratedSetSpec;
use crate::tolerances;
use rand::Rng;

/// The one-parameter family of horizontal directions `X2 + s X3 + (s^2/2) X4`
/// obtained by conjugating `X2` with `exp(s X1)`. Membership in a set that is
/// invariant under `X1` and monotone under `X2` is automatically monotone
/// under every member of this family.
pub fn conjugated_x2(s: f64) -> TangentVector {
    adjoint_exp(TangentVector::X1.scale(s), TangentVector::X2)
}

/// Record one membership observation: `q` must lie in the set. On failure
/// the violation value is how far `q` fell below the graph over its fiber.
fn record_membership(
    rep: &mut ValidationReport,
    spec: &CalibratedSetSpec,
    p: Point,
    q: Point,
    t: f64,
    msg: &str,
) {
    rep.samples += 1;
    if !spec.contains(q) {
        let shortfall = match spec.eval_graph(q.x3, q.x4) {
            ExtReal::Finite(g) => g - q.x2,
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::NegInf => f64::NEG_INFINITY,
        };
        rep.violation(vec![p.x1, p.x2, p.x3, p.x4, t], shortfall, 0.0, msg);
    }
}

/// Check that flowing a member of the set along `X2` for positive time stays
/// in the set. The image of `p` under the time-`t` flow of `X2` is written
/// out explicitly — `(p1, p2 + t, p3 + p1 t, p4 + p1^2 t / 2)` — so the check
/// exercises the membership predicate against an independent formula rather
/// than reusing [`flow`].
pub fn check_x2_monotone(spec: &CalibratedSetSpec, space: &SampleSpace) -> ValidationReport {
    let mut rep = ValidationReport::new("x2-monotone");
    let mut rng = seeded_rng(space.seed);
    for _ in 0..space.count {
        let Some(p) = space.sample_in_set(spec, &mut rng) else {
            continue;
        };
        for _ in 0..space.times_per_point {
            let t = space.positive_time(&mut rng);
            let q = Point::new(
                p.x1,
                p.x2 + t,
                p.x3 + p.x1 * t,
                p.x4 + p.x1 * p.x1 * t / 2.0,
            );
            record_membership(&mut rep, spec, p, q, t, "x2 flow left the set");
        }
    }
    rep
}

/// Check that flowing a member along an arbitrary fixed direction for
/// positive time stays in the set.
pub fn check_monotone_direction(
    spec: &CalibratedSetSpec,
    v: TangentVector,
    space: &SampleSpace,
) -> ValidationReport {
    let mut rep = ValidationReport::new("direction-monotone");
    rep.note(format!("direction = {:?}", v.as_array()));
    let mut rng = seeded_rng(space.seed);
    for _ in 0..space.count {
        let Some(p) = space.sample_in_set(spec, &mut rng) else {
            continue;
        };
        for _ in 0..space.times_per_point {
            let t = space.positive_time(&mut rng);
            let q = flow(p, v, t);
            record_membership(&mut rep, spec, p, q, t, "flow left the set");
        }
    }
    rep
}

/// Draw a point strictly inside the open cone
/// `{ x2 > 0, x4 > 0, x2 > x3^2 / (2 x4) }`.
pub fn sample_cone_interior(rng: &mut impl Rng) -> Point {
    let x1 = rng.random_range(-1.0..=1.0);
    let x4 = rng.random_range(0.05_f64..=2.0);
    let x3 = rng.random_range(-2.0_f64..=2.0);
    let margin = rng.random_range(0.01_f64..=1.5);
    Point::new(x1, x3 * x3 / (2.0 * x4) + margin, x3, x4)
}

/// Locate the boundary height above `(x3, x4)` by bisecting the membership
/// predicate along the vertical fiber `s -> (0, s, x3, x4)` (the `X2` flow
/// from height zero moves exactly `+s` in `x2` when `x1 = 0`). Returns
/// `None` when the fiber is entirely inside or outside the set within the
/// bracket, i.e. when the graph is infinite there.
pub fn boundary_point_on_fiber(
    spec: &CalibratedSetSpec,
    x3: f64,
    x4: f64,
    bracket: f64,
    tol: f64,
) -> Option<Point> {
    let member = |s: f64| spec.contains(Point::new(0.0, s, x3, x4));
    if member(-bracket) || !member(bracket) {
        return None;
    }
    let (mut lo, mut hi) = (-bracket, bracket); // lo outside, hi inside
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if member(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(Point::new(0.0, 0.5 * (lo + hi), x3, x4))
}

/// Boundary points above a grid of `(x3, x4)` fibers, skipping fibers where
/// the graph is infinite.
pub fn boundary_grid(
    spec: &CalibratedSetSpec,
    x3s: &[f64],
    x4s: &[f64],
    bracket: f64,
    tol: f64,
) -> Vec<Point> {
    let mut pts = Vec::new();
    for &x3 in x3s {
        for &x4 in x4s {
            if let Some(p) = boundary_point_on_fiber(spec, x3, x4, bracket, tol) {
                pts.push(p);
            }
        }
    }
    pts
}

/// Check that translating boundary points by elements of the open cone
/// `{ x2 > 0, x4 > 0, x2 > x3^2/(2 x4) }` lands inside the set. Boundary
/// points are located by bisection on each sampled fiber; `per_point` cone
/// elements are drawn for each.
pub fn cone_inclusion(
    spec: &CalibratedSetSpec,
    space: &SampleSpace,
    per_point: usize,
) -> ValidationReport {
    let mut rep = ValidationReport::new("cone-inclusion");
    let mut rng = seeded_rng(space.seed);
    let n = (space.count as f64).sqrt().ceil().max(2.0) as usize;
    let x3s = crate::sampler::linspace(space.x3.0, space.x3.1, n);
    let x4s = crate::sampler::linspace(space.x4.0, space.x4.1, n);
    let boundary = boundary_grid(
        spec,
        &x3s,
        &x4s,
        tolerances::DEFAULT_BRACKET,
        tolerances::BISECTION,
    );
    rep.note(format!("boundary points located: {}", boundary.len()));
    for p in boundary {
        for _ in 0..per_point {
            let c = sample_cone_interior(&mut rng);
            let q = p.translate(c);
            record_membership(&mut rep, spec, p, q, 0.0, "cone translate left the set");
        }
    }
    rep
}

/// Check the slope bound along tilted fibers: for sampled `(x3, x4)`,
/// `a` and `t > 0`, the graph must satisfy
/// `G(x3 + a t, x4 + a^2 t / 2) <= G(x3, x4) + t + eps`.
/// When `G(x3, x4) = -inf` the right-hand side is `-inf`, so the shifted
/// value must also be `-inf`.
pub fn partial_lipschitz_check(
    spec: &CalibratedSetSpec,
    space: &SampleSpace,
) -> ValidationReport {
    let mut rep = ValidationReport::new("partial-lipschitz");
    let mut rng = seeded_rng(space.seed);
    let eps = 1e-9;
    for _ in 0..space.count {
        let x3 = rng.random_range(space.x3.0..=space.x3.1);
        let x4 = rng.random_range(space.x4.0..=space.x4.1);
        let a = rng.random_range(-5.0_f64..=5.0);
        let t = rng.random_range(1e-6_f64..=1.0);
        let here = spec.eval_graph(x3, x4);
        let there = spec.eval_graph(x3 + a * t, x4 + a * a * t / 2.0);
        rep.samples += 1;
        match (here, there) {
            (ExtReal::PosInf, _) => {} // bound is vacuous
            (ExtReal::NegInf, ExtReal::NegInf) => {}
            (ExtReal::NegInf, other) => {
                rep.violation(
                    vec![x3, x4, a, t],
                    match other {
                        ExtReal::Finite(v) => v,
                        _ => f64::INFINITY,
                    },
                    f64::NEG_INFINITY,
                    "graph escaped its bottomless region against the tilt",
                );
            }
            (ExtReal::Finite(g0), ExtReal::Finite(g1)) => {
                rep.observe(g1 - g0 - t);
                if g1 > g0 + t + eps {
                    rep.violation(
                        vec![x3, x4, a, t],
                        g1 - g0,
                        t,
                        "slope along tilted fiber exceeds 1",
                    );
                }
            }
            (ExtReal::Finite(_), other) => {
                if other == ExtReal::PosInf {
                    rep.violation(
                        vec![x3, x4, a, t],
                        f64::INFINITY,
                        t,
                        "graph jumped to +inf along tilted fiber",
                    );
                }
                // -inf is fine: far below the bound.
            }
        }
    }
    rep
}

/// Check that the region where the graph is `-inf` is upward-closed in
/// `x4`: once a fiber is bottomless, every fiber with strictly larger `x4`
/// must be bottomless too, regardless of `x3`.
pub fn level_set_check(spec: &CalibratedSetSpec, space: &SampleSpace) -> ValidationReport {
    let mut rep = ValidationReport::new("neg-inf-level-set");
    let mut rng = seeded_rng(space.seed);
    let mut samples = Vec::with_capacity(space.count);
    for _ in 0..space.count {
        let x3 = rng.random_range(space.x3.0..=space.x3.1);
        let x4 = rng.random_range(space.x4.0..=space.x4.1);
        samples.push((x3, x4, spec.eval_graph(x3, x4)));
    }
    let min_bottomless = samples
        .iter()
        .filter(|(_, _, g)| *g == ExtReal::NegInf)
        .map(|&(_, x4, _)| x4)
        .fold(f64::INFINITY, f64::min);
    rep.note(format!("lowest bottomless x4 sampled: {min_bottomless}"));
    for (x3, x4, g) in samples {
        rep.samples += 1;
        if x4 > min_bottomless && g != ExtReal::NegInf {
            rep.violation(
                vec![x3, x4],
                match g {
                    ExtReal::Finite(v) => v,
                    _ => f64::INFINITY,
                },
                f64::NEG_INFINITY,
                "finite graph value above a bottomless fiber",
            );
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_fn::GraphFunction;
    use crate::pwl::PiecewiseLinear;
    use approx::assert_relative_eq;

    fn small_space() -> SampleSpace {
        SampleSpace::default().with_count(800)
    }

    #[test]
    fn conjugated_x2_matches_quadratic_profile() {
        let v = conjugated_x2(2.0);
        assert_relative_eq!(v.c2, 1.0);
        assert_relative_eq!(v.c3, 2.0);
        assert_relative_eq!(v.c4, 2.0);
        assert_relative_eq!(v.c1, 0.0);
    }

    #[test]
    fn halfspace_passes_all_monotone_checks() {
        let spec = CalibratedSetSpec::half_space(crate::sets::HalfSpaceAxis::X2, 0.0).unwrap();
        let space = small_space();
        assert!(check_x2_monotone(&spec, &space).pass);
        assert!(check_monotone_direction(&spec, TangentVector::X4, &space).pass);
        assert!(check_monotone_direction(&spec, conjugated_x2(2.0), &space).pass);
        assert!(partial_lipschitz_check(&spec, &space).pass);
        assert!(level_set_check(&spec, &space).pass);
    }

    #[test]
    fn cone_passes_all_monotone_checks() {
        let spec = CalibratedSetSpec::cone();
        let space = small_space();
        assert!(check_x2_monotone(&spec, &space).pass);
        assert!(check_monotone_direction(&spec, TangentVector::X4, &space).pass);
        for s in [-3.0, -1.0, 0.5, 2.0] {
            assert!(check_monotone_direction(&spec, conjugated_x2(s), &space).pass);
        }
        assert!(partial_lipschitz_check(&spec, &space).pass);
        assert!(level_set_check(&spec, &space).pass);
        assert!(cone_inclusion(&spec, &space, 8).pass);
    }

    #[test]
    fn monotone_g_passes_checks() {
        let g = PiecewiseLinear::new(vec![(-1.0, 1.0), (0.0, 0.0), (0.0, -0.5), (1.0, -1.0)])
            .unwrap();
        let spec = CalibratedSetSpec::monotone_g(g);
        let space = small_space();
        assert!(check_x2_monotone(&spec, &space).pass);
        assert!(check_monotone_direction(&spec, TangentVector::X4, &space).pass);
        assert!(partial_lipschitz_check(&spec, &space).pass);
        assert!(cone_inclusion(&spec, &space, 8).pass);
    }

    #[test]
    fn increasing_profile_is_falsified() {
        // x2 > x4 is not monotone under X4: flowing along X4 increases x4
        // but not x2, pushing points below the graph.
        let graph = GraphFunction::smooth(|_, x4| x4);
        let spec = CalibratedSetSpec::custom(graph);
        let space = small_space();
        let rep = check_monotone_direction(&spec, TangentVector::X4, &space);
        assert!(!rep.pass, "increasing profile must be caught");
    }

    #[test]
    fn tilted_slope_violation_is_caught() {
        // G = -2 x3 has slope 2 along the a = -1 tilt, violating the
        // slope-1 bound.
        let graph = GraphFunction::smooth(|x3, _| -2.0 * x3);
        let spec = CalibratedSetSpec::custom(graph);
        let rep = partial_lipschitz_check(&spec, &small_space());
        assert!(!rep.pass);
    }

    #[test]
    fn bad_level_set_is_caught() {
        // Bottomless only on a bounded x4 window: fails upward closure.
        let graph = GraphFunction::smooth_ext(|_, x4| {
            if (1.0..2.0).contains(&x4) {
                ExtReal::NegInf
            } else {
                ExtReal::Finite(0.0)
            }
        });
        let spec = CalibratedSetSpec::custom(graph);
        let rep = level_set_check(&spec, &small_space());
        assert!(!rep.pass);
    }

    #[test]
    fn boundary_bisection_hits_graph() {
        let spec = CalibratedSetSpec::cone();
        let p = boundary_point_on_fiber(&spec, 1.0, 0.5, 1e6, 1e-10).unwrap();
        assert_relative_eq!(p.x2, 1.0, epsilon = 1e-8);
        // Empty fiber: graph is +inf for x4 <= 0.
        assert!(boundary_point_on_fiber(&spec, 1.0, -0.5, 1e6, 1e-10).is_none());
    }
}
