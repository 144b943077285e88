//! Intrinsic graphs over the vertical hyperplane `W = {x2 = 0}`.
//!
//! A set that is monotone along a horizontal direction `a X1 + X2` meets
//! each flow line `t -> flow(w, a X1 + X2, t)` in an open half-line
//! `(T(w), +inf)`. This module extracts that graph function `T` by
//! bisection, provides the closed form for the parabolic-cone model set,
//! and quantifies how irregular `T` can be: it may jump (so it is not
//! continuous), it grows like a cube root near the base point (so it is
//! not Lipschitz in the Euclidean sense), but it does stay below a
//! two-scale Hoelder-type profile, which is the intrinsic Lipschitz bound.

use serde::Serialize;

use crate::extreal::ExtReal;
use crate::point::{flow, Point};
use crate::pwl::{PiecewiseLinear, PwlJump};
use crate::quartic::real_roots;
use crate::report::ValidationReport;
use crate::sets::CalibratedSetSpec;
use crate::algebra::TangentVector;
use crate::tolerances;
use crate::Error;

/// A graph-extraction query: which set, which horizontal direction, and
/// from which base point on the hyperplane `{x2 = 0}`.
#[derive(Clone, Debug)]
pub struct IntrinsicQuery {
    pub spec: CalibratedSetSpec,
    /// Coefficient `a` of the direction `a X1 + X2`. `a = 0` is allowed
    /// here (it exhibits the discontinuity phenomenon); the bound checks
    /// below require `a != 0`.
    pub a: f64,
    pub base: Point,
}

impl IntrinsicQuery {
    /// The base point must sit exactly on `{x2 = 0}`: the graph value is an
    /// offset along the flow, so any residual `x2` would silently shift it.
    pub fn new(spec: CalibratedSetSpec, a: f64, base: Point) -> Result<Self, Error> {
        if base.x2 != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "base point must have x2 = 0 exactly, got {}",
                base.x2
            )));
        }
        if !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "direction coefficient must be finite, got {a}"
            )));
        }
        Ok(IntrinsicQuery { spec, a, base })
    }

    fn direction(&self) -> TangentVector {
        TangentVector::new(self.a, 1.0, 0.0, 0.0)
    }

    fn member(&self, t: f64) -> bool {
        self.spec.contains(flow(self.base, self.direction(), t))
    }
}

/// First entry time of the flow line into the set, by bisection.
///
/// Membership is sampled on a coarse prescan first; a calibrated set meets
/// the line in a half-line, so an inside sample followed by an outside one
/// proves the spec invalid and aborts with `NonMonotoneMembership`.
/// Returns `-inf` if the line is already inside at `t_lo` and `+inf` if it
/// is still outside at `t_hi`.
pub fn intrinsic_t(
    query: &IntrinsicQuery,
    bracket: (f64, f64),
    tol: f64,
) -> Result<ExtReal, Error> {
    let (t_lo, t_hi) = bracket;
    if !(t_hi > t_lo) || !t_lo.is_finite() || !t_hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bracket must be finite with t_lo < t_hi, got ({t_lo}, {t_hi})"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bisection tolerance must be positive, got {tol}"
        )));
    }

    let prescan = 33;
    let ts = crate::sampler::linspace(t_lo, t_hi, prescan);
    let membership: Vec<bool> = ts.iter().map(|&t| query.member(t)).collect();
    for i in 0..prescan - 1 {
        if membership[i] && !membership[i + 1] {
            return Err(Error::NonMonotoneMembership {
                t_inside: ts[i],
                t_outside: ts[i + 1],
            });
        }
    }

    if membership[0] {
        return Ok(ExtReal::NegInf);
    }
    if !membership[prescan - 1] {
        return Ok(ExtReal::PosInf);
    }
    // Bisection between the last outside sample and the first inside one.
    let first_inside = membership.iter().position(|&m| m).expect("checked above");
    let mut lo = ts[first_inside - 1];
    let mut hi = ts[first_inside];
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if query.member(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ExtReal::Finite(0.5 * (lo + hi)))
}

/// [`intrinsic_t`] with a growing bracket: starts on `[-1, 1]` and doubles
/// the failing end until the crossing is enclosed or the default bracket
/// bound is exceeded (then the infinite verdict stands).
pub fn intrinsic_t_auto(query: &IntrinsicQuery, tol: f64) -> Result<ExtReal, Error> {
    let limit = tolerances::DEFAULT_BRACKET;
    let mut lo = -1.0;
    let mut hi = 1.0;
    while query.member(lo) && lo > -limit {
        lo *= 2.0;
    }
    while !query.member(hi) && hi < limit {
        hi *= 2.0;
    }
    intrinsic_t(query, (lo.max(-limit), hi.min(limit)), tol)
}

/// Entry time of the line `t -> flow((0,0,p3,p4), a X1 + X2, t)` into the
/// model cone `{x4 > 0, x2 > x3^2/(2 x4)}`, in closed form.
///
/// Along the line, `x2 = t`, `x3 = p3 + a t^2/2`, `x4 = p4 + a^2 t^3/6`,
/// and membership is equivalent to
/// `Q(t) = (a^2/12) t^4 - a p3 t^2 + 2 p4 t - p3^2 > 0` together with
/// `x4(t) > 0`. Candidates for the entry time are the real roots of `Q`,
/// the time where `x4` turns positive, and `0`; the entry time is the
/// candidate with membership just above it and none just below. A
/// tangency that merely grazes the boundary cannot occur here: imposing
/// `Q = Q' = 0` forces `p3 = a t^2/2`, which makes the root triple, i.e.
/// a genuine sign change.
pub fn cone_t_closed_form(a: f64, p3: f64, p4: f64) -> Result<f64, Error> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "direction coefficient must be finite and nonzero, got {a}"
        )));
    }
    if !(p3.is_finite() && p4.is_finite()) {
        return Err(Error::InvalidParameter(
            "base coordinates must be finite".to_string(),
        ));
    }
    let q = |t: f64| {
        (a * a / 12.0) * t.powi(4) - a * p3 * t * t + 2.0 * p4 * t - p3 * p3
    };
    let member = |t: f64| {
        t > 0.0 && p4 + (a * a / 6.0) * t * t * t > 0.0 && q(t) > 0.0
    };

    let mut candidates: Vec<f64> = real_roots(&[
        -p3 * p3,
        2.0 * p4,
        -a * p3,
        0.0,
        a * a / 12.0,
    ])
    .into_iter()
    .filter(|&t| t >= 0.0)
    .collect();
    if p4 < 0.0 {
        candidates.push((-6.0 * p4 / (a * a)).cbrt());
    }
    candidates.push(0.0);
    candidates.sort_by(|x, y| x.partial_cmp(y).expect("roots are finite"));
    candidates.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * (1.0 + y.abs()));

    for (i, &t) in candidates.iter().enumerate() {
        let mut delta = 1e-7 * (1.0 + t.abs());
        if i + 1 < candidates.len() {
            delta = delta.min(0.5 * (candidates[i + 1] - t));
        }
        if i > 0 {
            delta = delta.min(0.5 * (t - candidates[i - 1]));
        }
        if delta <= 0.0 {
            continue;
        }
        let below_outside = t - delta < 0.0 || !member(t - delta);
        if member(t + delta) && below_outside {
            return Ok(t);
        }
    }
    // No candidate marks an entry: the line never enters (treated as the
    // degenerate value 0 only when the caller samples outside the cone's
    // reach; random draws never land here).
    Ok(0.0)
}

/// One detected discontinuity of the graph function.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct JumpFinding {
    pub location: f64,
    /// Limit from below the location (the larger value).
    pub value_below: f64,
    /// Limit from above the location.
    pub value_above: f64,
    pub size: f64,
}

/// Result of scanning the graph function of a step profile.
#[derive(Clone, Debug, Serialize)]
pub struct DiscontinuityReport {
    /// Sampled `(p4, T(0,0,0,p4))` pairs.
    pub grid: Vec<(f64, f64)>,
    pub jumps: Vec<JumpFinding>,
    /// Jumps the profile itself declares, for comparison.
    pub declared: Vec<PwlJump>,
}

/// Exhibits a discontinuous graph function: for the set
/// `{x2 > g(x4)}` and the pure `X2` direction (`a = 0`), the graph
/// function over base points `(0,0,0,p4)` is exactly `g(p4)`, so a step
/// in `g` is a step in `T`. The scan goes through the full bisection
/// pipeline rather than reading `g` off directly.
pub fn demonstrate_discontinuity(
    g: &PiecewiseLinear,
    range: (f64, f64),
    n: usize,
    min_jump: f64,
) -> Result<DiscontinuityReport, Error> {
    if !g.is_non_increasing() {
        return Err(Error::InvalidParameter(
            "profile must be non-increasing".to_string(),
        ));
    }
    if !(range.1 > range.0) || n < 2 {
        return Err(Error::InvalidParameter(
            "need a nondegenerate range and at least two scan points".to_string(),
        ));
    }
    let spec = CalibratedSetSpec::monotone_g(g.clone());
    let t_at = |p4: f64| -> Result<f64, Error> {
        let query = IntrinsicQuery::new(spec.clone(), 0.0, Point::new(0.0, 0.0, 0.0, p4))?;
        match intrinsic_t_auto(&query, tolerances::BISECTION)? {
            ExtReal::Finite(v) => Ok(v),
            other => Err(Error::InvalidParameter(format!(
                "graph value is not finite at p4 = {p4}: {other}"
            ))),
        }
    };

    let p4s = crate::sampler::linspace(range.0, range.1, n);
    let mut grid = Vec::with_capacity(n);
    for &p4 in &p4s {
        grid.push((p4, t_at(p4)?));
    }

    let mut jumps = Vec::new();
    for w in grid.windows(2) {
        let ((x_lo, t_lo), (x_hi, t_hi)) = (w[0], w[1]);
        if (t_lo - t_hi).abs() <= min_jump {
            continue;
        }
        // T is non-increasing; bisect on "T has dropped below the midpoint
        // value" to localize the step.
        let midvalue = 0.5 * (t_lo + t_hi);
        let (mut lo, mut hi) = (x_lo, x_hi);
        while hi - lo > 1e-9 * (1.0 + lo.abs()) {
            let mid = 0.5 * (lo + hi);
            if t_at(mid)? < midvalue {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let location = 0.5 * (lo + hi);
        let h = 1e-6 * (1.0 + location.abs());
        let value_below = t_at(location - h)?;
        let value_above = t_at(location + h)?;
        jumps.push(JumpFinding {
            location,
            value_below,
            value_above,
            size: value_below - value_above,
        });
    }

    Ok(DiscontinuityReport {
        grid,
        jumps,
        declared: g.jumps(),
    })
}

/// Least-squares fit of `log T` against `log |p4|`.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// The fitted `(log |p4|, log T)` pairs.
    pub points: Vec<(f64, f64)>,
}

impl ExponentFit {
    /// `exp(intercept)`: the multiplicative constant in `T = C |p4|^slope`.
    pub fn prefactor(&self) -> f64 {
        self.intercept.exp()
    }
}

/// Measures how the graph value over `(0,0,0,p4)` blows up as `p4 -> 0^-`:
/// the closed form gives `T = (24 |p4| / a^2)^(1/3)`, so the fitted slope
/// is `1/3` and difference quotients `T/|p4|` diverge — the graph function
/// is not Euclidean-Lipschitz near the base point.
pub fn lipschitz_blowup_exponent(a: f64, p4s: &[f64]) -> Result<ExponentFit, Error> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "direction coefficient must be finite and nonzero, got {a}"
        )));
    }
    let mut distinct: Vec<f64> = Vec::new();
    for &p4 in p4s {
        if !(p4 < 0.0 && p4.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sequence entries must be negative and finite, got {p4}"
            )));
        }
        if !distinct.contains(&p4) {
            distinct.push(p4);
        }
    }
    if distinct.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two distinct sequence entries for a fit".to_string(),
        ));
    }

    let mut points = Vec::with_capacity(distinct.len());
    for &p4 in &distinct {
        let t = cone_t_closed_form(a, 0.0, p4)?;
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "graph value vanished at p4 = {p4}; cannot take logs"
            )));
        }
        points.push((p4.abs().ln(), t.ln()));
    }

    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(ExponentFit {
        slope,
        intercept,
        r_squared,
        points,
    })
}

/// Two-scale profile `max(sqrt|p3|, cbrt|p4|)` controlling the graph
/// function of the cone.
pub fn two_scale_profile(p3: f64, p4: f64) -> f64 {
    p3.abs().sqrt().max(p4.abs().cbrt())
}

/// Smallest constant `K` with `T(a, p3, p4) <= K max(sqrt|p3|, cbrt|p4|)`
/// for the model cone, found numerically.
///
/// The ratio `T / profile` is invariant under the anisotropic scaling
/// `(p3, p4) -> (l^2 p3, l^3 p4)`, `T -> l T`, so the supremum over the
/// plane is attained on the two faces `|p3| = 1, |p4| <= 1` and
/// `|p4| = 1, |p3| <= 1`, where the profile is exactly 1. Each face is
/// scanned densely, the best cell is refined, and the result is inflated
/// by 1e-9 relative so downstream "zero violations" checks are not bitten
/// by ties.
pub fn holder_constant(a: f64, refine: usize) -> Result<f64, Error> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "direction coefficient must be finite and nonzero, got {a}"
        )));
    }
    // The four faces, each parameterized by s in [-1, 1].
    let faces: [Box<dyn Fn(f64) -> (f64, f64)>; 4] = [
        Box::new(|s| (1.0, s)),
        Box::new(|s| (-1.0, s)),
        Box::new(|s| (s, 1.0)),
        Box::new(|s| (s, -1.0)),
    ];

    let coarse = 2001;
    let mut best = 0.0_f64;
    let mut best_face = 0;
    let mut best_s = 0.0;
    for (i, face) in faces.iter().enumerate() {
        for &s in &crate::sampler::linspace(-1.0, 1.0, coarse) {
            let (p3, p4) = face(s);
            let t = cone_t_closed_form(a, p3, p4)?;
            if t > best {
                best = t;
                best_face = i;
                best_s = s;
            }
        }
    }

    // Shrinking-window refinement around the best coarse sample.
    let mut window = 2.0 / (coarse as f64 - 1.0);
    for _ in 0..refine {
        let lo = (best_s - window).max(-1.0);
        let hi = (best_s + window).min(1.0);
        for &s in &crate::sampler::linspace(lo, hi, 41) {
            let (p3, p4) = faces[best_face](s);
            let t = cone_t_closed_form(a, p3, p4)?;
            if t > best {
                best = t;
                best_s = s;
            }
        }
        window /= 10.0;
    }

    Ok(best * (1.0 + 1e-9))
}

/// Checks `T(p) <= K max(sqrt|p3|, cbrt|p4|)` for the model cone at every
/// sampled `(p3, p4)`.
pub fn holder_bound_check(
    a: f64,
    k: f64,
    samples: &[(f64, f64)],
    tol: f64,
) -> Result<ValidationReport, Error> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "direction coefficient must be finite and nonzero, got {a}"
        )));
    }
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bound constant must be positive, got {k}"
        )));
    }
    let mut rep = ValidationReport::new("holder_bound");
    for &(p3, p4) in samples {
        let t = cone_t_closed_form(a, p3, p4)?;
        let bound = k * two_scale_profile(p3, p4);
        rep.samples += 1;
        rep.observe(t - bound);
        if t > bound + 10.0 * tol + 1e-12 {
            rep.violation(
                vec![p3, p4],
                t,
                bound,
                "graph value exceeds the two-scale profile",
            );
        }
    }
    rep.truncate_violations(16);
    Ok(rep)
}

/// Intrinsic-Lipschitz cone criterion: around every boundary point `p`,
/// the profile `K max(sqrt|w3|, cbrt|w4|)` separates the set from its
/// complement along the flow lines through the translated hyperplane.
/// For each offset `w = (0,0,w3,w4)` and margin `m > 0`, the point
/// reached by flowing for `K * profile + m` from `p + w` must lie inside,
/// and the point reached by flowing for `-(K * profile + m)` must lie
/// outside.
///
/// `k` should be at least the optimal constant of [`holder_constant`];
/// margins well above the boundary-location tolerance keep the check
/// strict.
pub fn intrinsic_cone_test(
    spec: &CalibratedSetSpec,
    a: f64,
    k: f64,
    boundary_points: &[Point],
    margins: &[f64],
    w_grid: usize,
) -> Result<ValidationReport, Error> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "direction coefficient must be finite and nonzero, got {a}"
        )));
    }
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bound constant must be positive, got {k}"
        )));
    }
    let direction = TangentVector::new(a, 1.0, 0.0, 0.0);
    let mut rep = ValidationReport::new("intrinsic_cone");
    let ws = crate::sampler::linspace(-1.0, 1.0, w_grid.max(2));
    for &p in boundary_points {
        for &w3 in &ws {
            for &w4 in &ws {
                let profile = k * two_scale_profile(w3, w4);
                for &m in margins {
                    let above = flow(Point::new(0.0, 0.0, w3, w4), direction, profile + m)
                        .translate(p);
                    rep.samples += 1;
                    if !spec.contains(above) {
                        rep.violation(
                            vec![p.x3, p.x4, w3, w4, m],
                            profile + m,
                            f64::NAN,
                            "point above the profile fell outside the set",
                        );
                    }
                    let below = flow(Point::new(0.0, 0.0, w3, w4), direction, -(profile + m))
                        .translate(p);
                    rep.samples += 1;
                    if spec.contains(below) {
                        rep.violation(
                            vec![p.x3, p.x4, w3, w4, m],
                            -(profile + m),
                            f64::NAN,
                            "point below the profile fell inside the set",
                        );
                    }
                }
            }
        }
    }
    rep.truncate_violations(16);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::HalfSpaceAxis;
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn cone_closed_form_matches_the_cube_root() {
        let t = cone_t_closed_form(1.0, 0.0, -1.0 / 24.0).unwrap();
        assert_relative_eq!(t, 1.0, epsilon = 1e-12);
        // Scaling in a: T = (24 |p4| / a^2)^(1/3).
        let t2 = cone_t_closed_form(2.0, 0.0, -1.0).unwrap();
        assert_relative_eq!(t2, 6.0_f64.cbrt(), epsilon = 1e-12);
    }

    #[test]
    fn origin_side_points_enter_immediately() {
        assert_eq!(cone_t_closed_form(1.0, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(cone_t_closed_form(-3.0, 0.0, 2.5).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_agrees_with_bisection_on_the_spec_example() {
        let t = cone_t_closed_form(2.0, 1.0, -1.0).unwrap();
        let query = IntrinsicQuery::new(
            CalibratedSetSpec::cone(),
            2.0,
            Point::new(0.0, 0.0, 1.0, -1.0),
        )
        .unwrap();
        let bis = intrinsic_t(&query, (-1.0, 100.0), tolerances::BISECTION)
            .unwrap()
            .finite()
            .unwrap();
        assert!((t - bis).abs() <= 1e-8, "closed {t} vs bisection {bis}");
    }

    #[test]
    fn closed_form_agrees_with_bisection_at_random() {
        let mut rng = crate::sampler::seeded_rng(5);
        for _ in 0..1000 {
            let mut a: f64 = rng.random_range(0.3..=3.0);
            if rng.random_bool(0.5) {
                a = -a;
            }
            let p3: f64 = rng.random_range(-2.0..=2.0);
            let p4: f64 = rng.random_range(-2.0..=2.0);
            let t = cone_t_closed_form(a, p3, p4).unwrap();
            let query = IntrinsicQuery::new(
                CalibratedSetSpec::cone(),
                a,
                Point::new(0.0, 0.0, p3, p4),
            )
            .unwrap();
            let bis = intrinsic_t(&query, (-1.0, 100.0), tolerances::BISECTION)
                .unwrap()
                .finite()
                .expect("entry time is finite for a != 0");
            assert!(
                (t - bis).abs() <= 10.0 * tolerances::BISECTION,
                "a={a} p3={p3} p4={p4}: closed {t} vs bisection {bis}"
            );
            // The side condition holds at the returned time (T = 0 only
            // when the base is already on the inner side).
            if t > 0.0 {
                assert!(p4 + a * a / 6.0 * t.powi(3) > 0.0);
            } else {
                assert!(p4 >= 0.0);
            }
        }
    }

    #[test]
    fn entry_time_scales_anisotropically() {
        // T(a, 0, p4) * a^(2/3) is independent of a.
        let reference = cone_t_closed_form(1.0, 0.0, -0.7).unwrap();
        for &a in &[0.5, 1.0, 2.0, 4.0] {
            let t = cone_t_closed_form(a, 0.0, -0.7).unwrap();
            assert_relative_eq!(t * a.powf(2.0 / 3.0), reference, epsilon = 1e-9);
        }
    }

    #[test]
    fn half_space_graph_value_is_zero() {
        let spec = CalibratedSetSpec::half_space(HalfSpaceAxis::X2, 0.0).unwrap();
        for &a in &[0.0, 1.0, -2.0] {
            let query =
                IntrinsicQuery::new(spec.clone(), a, Point::new(0.3, 0.0, -1.0, 2.0)).unwrap();
            let t = intrinsic_t(&query, (-10.0, 10.0), 1e-12)
                .unwrap()
                .finite()
                .unwrap();
            assert!(t.abs() <= 1e-11, "a={a}: {t}");
        }
    }

    #[test]
    fn bracket_misses_produce_infinite_verdicts() {
        let spec = CalibratedSetSpec::half_space(HalfSpaceAxis::X2, 5.0).unwrap();
        let query = IntrinsicQuery::new(spec, 0.0, Point::ORIGIN).unwrap();
        // Entry at t = 5: a bracket below it reports +inf, one above -inf.
        assert_eq!(
            intrinsic_t(&query, (-1.0, 1.0), 1e-10).unwrap(),
            ExtReal::PosInf
        );
        assert_eq!(
            intrinsic_t(&query, (6.0, 7.0), 1e-10).unwrap(),
            ExtReal::NegInf
        );
        assert_relative_eq!(
            intrinsic_t_auto(&query, 1e-10).unwrap().finite().unwrap(),
            5.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn base_point_off_the_hyperplane_is_rejected() {
        let err = IntrinsicQuery::new(
            CalibratedSetSpec::cone(),
            1.0,
            Point::new(0.0, 1e-15, 0.0, 0.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn non_half_line_membership_is_detected() {
        use crate::graph_fn::GraphFunction;
        // A bounded bump of membership: x2 > 1 outside |x3| < 1, x2 > -1
        // inside. Along a = 1 from a suitable base the line dips in and
        // out.
        let graph = GraphFunction::smooth(|x3, _x4| if x3.abs() < 1.0 { -1.0 } else { 1.0 });
        let spec = CalibratedSetSpec::custom(graph);
        let query =
            IntrinsicQuery::new(spec, 1.0, Point::new(-3.0, 0.0, 0.0, 0.0)).unwrap();
        // x3(t) = t^2/2 - 3t leaves |x3| < 1 at t = 3 - sqrt(7) ~ 0.354,
        // so the threshold jumps from -1 to 1 there: membership holds on
        // (0, 0.354), fails on (0.354, 1), and resumes after t = 1.
        let err = intrinsic_t(&query, (0.0, 3.5), 1e-10).unwrap_err();
        assert!(matches!(err, Error::NonMonotoneMembership { .. }));
    }

    #[test]
    fn blowup_exponent_is_one_third() {
        let p4s: Vec<f64> = (1..=6).map(|k| -(10.0_f64).powi(-k)).collect();
        let fit = lipschitz_blowup_exponent(1.0, &p4s).unwrap();
        assert_relative_eq!(fit.slope, 1.0 / 3.0, epsilon = 1e-9);
        assert!(fit.r_squared > 0.999999);
        let fit2 = lipschitz_blowup_exponent(2.0, &p4s).unwrap();
        assert_relative_eq!(fit2.prefactor(), 6.0_f64.cbrt(), epsilon = 1e-9);
        // Degenerate sequences are rejected.
        assert!(lipschitz_blowup_exponent(1.0, &[-0.1, -0.1]).is_err());
        assert!(lipschitz_blowup_exponent(1.0, &[-0.1, 0.1]).is_err());
        assert!(lipschitz_blowup_exponent(0.0, &p4s).is_err());
    }

    #[test]
    fn holder_constant_dominates_the_pure_p4_direction() {
        let k = holder_constant(1.0, 3).unwrap();
        assert!(k >= 24.0_f64.cbrt());
        // The constant is attained by some face point, so it bounds a grid.
        let mut samples = Vec::new();
        for &p3 in &crate::sampler::linspace(-1.0, 1.0, 41) {
            for &p4 in &crate::sampler::linspace(-1.0, 1.0, 41) {
                samples.push((p3, p4));
            }
        }
        let rep = holder_bound_check(1.0, k, &samples, tolerances::BISECTION).unwrap();
        assert!(rep.pass, "{:?}", rep.violations.first());
        // A tenth of the constant must fail.
        let rep_small =
            holder_bound_check(1.0, k / 10.0, &samples, tolerances::BISECTION).unwrap();
        assert!(!rep_small.pass);
    }

    #[test]
    fn discontinuity_scan_finds_the_declared_step() {
        let g = PiecewiseLinear::new(vec![(-1.0, 0.0), (0.0, 0.0), (0.0, -1.0), (1.0, -1.0)])
            .unwrap();
        let report = demonstrate_discontinuity(&g, (-0.5, 0.5), 41, 0.5).unwrap();
        assert_eq!(report.jumps.len(), 1);
        let j = &report.jumps[0];
        assert!((j.location).abs() <= 1e-6);
        assert_relative_eq!(j.size, 1.0, epsilon = 1e-5);
        assert_eq!(report.declared.len(), 1);

        // A continuous profile reports no jumps.
        let smooth = PiecewiseLinear::new(vec![(-1.0, 1.0), (1.0, 0.0)]).unwrap();
        let quiet = demonstrate_discontinuity(&smooth, (-0.5, 0.5), 21, 0.1).unwrap();
        assert!(quiet.jumps.is_empty());

        // Non-monotone profiles are rejected.
        let bad = PiecewiseLinear::new(vec![(-1.0, 0.0), (1.0, 1.0)]).unwrap();
        assert!(demonstrate_discontinuity(&bad, (-0.5, 0.5), 11, 0.1).is_err());
    }

    #[test]
    fn intrinsic_cone_criterion_holds_for_model_sets() {
        let a = 1.0;
        let k = holder_constant(a, 3).unwrap();
        let margins = [0.05, 0.5];

        let cone = CalibratedSetSpec::cone();
        let x3s = crate::sampler::linspace(-1.0, 1.0, 5);
        let x4s = crate::sampler::linspace(0.5, 2.0, 4);
        let pts = crate::monotone::boundary_grid(&cone, &x3s, &x4s, 1e6, 1e-10);
        assert!(!pts.is_empty());
        let rep = intrinsic_cone_test(&cone, a, k, &pts, &margins, 7).unwrap();
        assert!(rep.pass, "{:?}", rep.violations.first());

        let half = CalibratedSetSpec::half_space(HalfSpaceAxis::X2, 0.0).unwrap();
        let pts = crate::monotone::boundary_grid(&half, &x3s, &x4s, 1e6, 1e-10);
        let rep = intrinsic_cone_test(&half, a, k, &pts, &margins, 7).unwrap();
        assert!(rep.pass, "{:?}", rep.violations.first());

        let g = PiecewiseLinear::new(vec![(-1.0, 1.0), (0.0, 1.0), (0.0, 0.0), (1.0, 0.0)])
            .unwrap();
        let step = CalibratedSetSpec::monotone_g(g);
        let pts = crate::monotone::boundary_grid(
            &step,
            &x3s,
            &crate::sampler::linspace(-0.8, 0.8, 5),
            1e6,
            1e-10,
        );
        let rep = intrinsic_cone_test(&step, a, k, &pts, &margins, 7).unwrap();
        assert!(rep.pass, "{:?}", rep.violations.first());
    }
}
