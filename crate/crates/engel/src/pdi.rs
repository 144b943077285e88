//! The differential inequality that characterizes graphs of monotone sets.
//!
//! A set `{x2 > G(x3, x4)}` is preserved by the horizontal flows exactly
//! when `(d3 G)^2 + 2 d4 G <= 0` holds in the distributional sense. This
//! module checks that inequality two ways: pointwise on a grid with
//! Richardson-extrapolated central differences (for graphs declared smooth
//! on the region), and in weak form by integrating `G` against derivatives
//! of compactly supported polynomial bumps (valid even across kinks and
//! jumps).

use crate::extreal::ExtReal;
use crate::graph_fn::{GraphFunction, SegmentAxis};
use crate::quadrature::gauss_legendre;
use crate::report::ValidationReport;
use crate::sets::{CalibratedSetSpec, KinkLine};
use crate::tolerances;
use crate::Error;

/// Closed axis-aligned rectangle in the `(x3, x4)` plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub x3: (f64, f64),
    pub x4: (f64, f64),
}

impl Region {
    /// Requires finite bounds with `lo < hi` on both axes.
    pub fn new(x3: (f64, f64), x4: (f64, f64)) -> Result<Self, Error> {
        for (name, (lo, hi)) in [("x3", x3), ("x4", x4)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidParameter(format!(
                    "region {name} bounds must be finite with lo < hi, got ({lo}, {hi})"
                )));
            }
        }
        Ok(Region { x3, x4 })
    }

    /// `n x n` tensor grid including the boundary (`n >= 2`).
    pub fn grid(&self, n: usize) -> Vec<(f64, f64)> {
        let xs = crate::sampler::linspace(self.x3.0, self.x3.1, n.max(2));
        let ys = crate::sampler::linspace(self.x4.0, self.x4.1, n.max(2));
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for &x3 in &xs {
            for &x4 in &ys {
                out.push((x3, x4));
            }
        }
        out
    }

    pub fn contains(&self, x3: f64, x4: f64) -> bool {
        x3 >= self.x3.0 && x3 <= self.x3.1 && x4 >= self.x4.0 && x4 <= self.x4.1
    }
}

/// Evaluate `G` demanding a finite value; a hit on `+/-inf` aborts the
/// pointwise check because central differences are meaningless there.
fn finite_value(graph: &GraphFunction, x3: f64, x4: f64) -> Result<f64, Error> {
    match graph.eval(x3, x4) {
        ExtReal::Finite(v) if v.is_finite() => Ok(v),
        _ => Err(Error::RegionContainsInfinite { x3, x4 }),
    }
}

/// Richardson-extrapolated central difference: combining spacings `h` and
/// `h/2` as `(4 D_{h/2} - D_h) / 3` cancels the `h^2` truncation term,
/// leaving an error of order `h^4 f^(5) / 480` — about `1e-10` for unit
/// fifth derivatives at the default spacing `1e-3`, comfortably inside the
/// default tolerance. A plain central difference would sit near `1e-5` and
/// drown the signal.
fn richardson_d3(graph: &GraphFunction, x3: f64, x4: f64, h: f64) -> Result<f64, Error> {
    let d_h = (finite_value(graph, x3 + h, x4)? - finite_value(graph, x3 - h, x4)?) / (2.0 * h);
    let d_h2 = (finite_value(graph, x3 + h / 2.0, x4)? - finite_value(graph, x3 - h / 2.0, x4)?) / h;
    Ok((4.0 * d_h2 - d_h) / 3.0)
}

fn richardson_d4(graph: &GraphFunction, x3: f64, x4: f64, h: f64) -> Result<f64, Error> {
    let d_h = (finite_value(graph, x3, x4 + h)? - finite_value(graph, x3, x4 - h)?) / (2.0 * h);
    let d_h2 = (finite_value(graph, x3, x4 + h / 2.0)? - finite_value(graph, x3, x4 - h / 2.0)?) / h;
    Ok((4.0 * d_h2 - d_h) / 3.0)
}

/// Does the 5-point stencil around `(x3, x4)` with spacing `step` straddle
/// the kink line? Central differences across a slope break report the
/// average of the two slopes plus an extrapolation overshoot as large as
/// `(13 s_+ - s_-) / 12`, so such stencils are excluded rather than
/// evaluated.
fn stencil_straddles(kink: &KinkLine, x3: f64, x4: f64, step: f64) -> bool {
    match *kink {
        KinkLine::ConstX4 { level } => (x4 - level).abs() <= 1.01 * step,
        KinkLine::Oblique { k, u } => {
            // Along the stencil, k*x3 - x4 moves by at most max(|k|, 1)*step.
            (k * x3 - x4 - u).abs() <= 1.01 * k.abs().max(1.0) * step
        }
    }
}

/// Grid check of `(d3 G)^2 + 2 d4 G <= tol` on `region`.
///
/// `kinks` lists lines where `G` is continuous but not differentiable;
/// stencils touching them are skipped (and counted in the notes), since
/// finite differences are only meaningful where `G` is smooth. Declared
/// jump segments inside the region (grown by `step` so no stencil can
/// reach across) are a precondition failure, not a violation.
pub fn pdi_pointwise(
    graph: &GraphFunction,
    kinks: &[KinkLine],
    region: &Region,
    grid_n: usize,
    step: f64,
    tol: f64,
) -> Result<ValidationReport, Error> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let (x3_lo, x3_hi) = (region.x3.0 - step, region.x3.1 + step);
    let (x4_lo, x4_hi) = (region.x4.0 - step, region.x4.1 + step);
    for seg in graph.jump_segments() {
        if seg.intersects_region(x3_lo, x3_hi, x4_lo, x4_hi) {
            return Err(Error::RegionContainsJump {
                x3_lo,
                x3_hi,
                x4_lo,
                x4_hi,
            });
        }
    }

    let mut rep = ValidationReport::new("pdi_pointwise");
    let mut skipped = 0usize;
    for (x3, x4) in region.grid(grid_n) {
        if kinks.iter().any(|k| stencil_straddles(k, x3, x4, step)) {
            skipped += 1;
            continue;
        }
        let d3 = richardson_d3(graph, x3, x4, step)?;
        let d4 = richardson_d4(graph, x3, x4, step)?;
        let residual = d3 * d3 + 2.0 * d4;
        rep.samples += 1;
        rep.observe(residual);
        if residual > tol {
            rep.violation(
                vec![x3, x4],
                residual,
                tol,
                "pointwise differential inequality exceeded",
            );
        }
    }
    if skipped > 0 {
        rep.note(format!(
            "{skipped} grid points skipped: stencil straddles a declared kink line"
        ));
    }
    rep.truncate_violations(16);
    Ok(rep)
}

/// [`pdi_pointwise`] with the graph and kink lines taken from a set
/// description.
pub fn pdi_pointwise_spec(
    spec: &CalibratedSetSpec,
    region: &Region,
    grid_n: usize,
    step: f64,
    tol: f64,
) -> Result<ValidationReport, Error> {
    pdi_pointwise(&spec.graph(), &spec.kink_lines(), region, grid_n, step, tol)
}

/// Polynomial bump `h(x) = c (1 - rho^2/r^2)^m` on the disk `rho < r`,
/// zero outside, with `c = (m+1)/(pi r^2)` so the integral is exactly 1.
/// `m` controls smoothness: `h` is `C^(m-1)` across the support boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub center3: f64,
    pub center4: f64,
    pub radius: f64,
    pub degree: u32,
}

impl Bump {
    pub const DEFAULT_DEGREE: u32 = 4;

    pub fn new(center3: f64, center4: f64, radius: f64, degree: u32) -> Result<Self, Error> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bump radius must be positive, got {radius}"
            )));
        }
        if !(center3.is_finite() && center4.is_finite()) {
            return Err(Error::InvalidParameter(
                "bump center must be finite".to_string(),
            ));
        }
        if degree < 1 {
            return Err(Error::InvalidParameter(
                "bump degree must be at least 1 for a continuous derivative".to_string(),
            ));
        }
        Ok(Bump {
            center3,
            center4,
            radius,
            degree,
        })
    }

    fn normalization(&self) -> f64 {
        (self.degree as f64 + 1.0) / (std::f64::consts::PI * self.radius * self.radius)
    }

    /// `1 - rho^2 / r^2`, clamped to zero outside the disk.
    fn profile(&self, x3: f64, x4: f64) -> f64 {
        let dx3 = x3 - self.center3;
        let dx4 = x4 - self.center4;
        let rr = self.radius * self.radius;
        (1.0 - (dx3 * dx3 + dx4 * dx4) / rr).max(0.0)
    }

    pub fn eval(&self, x3: f64, x4: f64) -> f64 {
        let p = self.profile(x3, x4);
        if p == 0.0 {
            return 0.0;
        }
        self.normalization() * p.powi(self.degree as i32)
    }

    pub fn d3(&self, x3: f64, x4: f64) -> f64 {
        let p = self.profile(x3, x4);
        if p == 0.0 {
            return 0.0;
        }
        let rr = self.radius * self.radius;
        -self.normalization()
            * (self.degree as f64)
            * p.powi(self.degree as i32 - 1)
            * 2.0
            * (x3 - self.center3)
            / rr
    }

    pub fn d4(&self, x3: f64, x4: f64) -> f64 {
        let p = self.profile(x3, x4);
        if p == 0.0 {
            return 0.0;
        }
        let rr = self.radius * self.radius;
        -self.normalization()
            * (self.degree as f64)
            * p.powi(self.degree as i32 - 1)
            * 2.0
            * (x4 - self.center4)
            / rr
    }
}

/// A finite collection of bumps used as test functions in the weak form of
/// the inequality.
#[derive(Clone, Debug)]
pub struct TestFunctionFamily {
    bumps: Vec<Bump>,
}

impl TestFunctionFamily {
    pub fn new(bumps: Vec<Bump>) -> Self {
        TestFunctionFamily { bumps }
    }

    pub fn bumps(&self) -> &[Bump] {
        &self.bumps
    }

    /// `n x n` bump centers on the region inset by `radius`, so every
    /// support disk stays inside the region. Errors when the region is too
    /// small to hold even one such disk.
    pub fn grid_in_region(
        region: &Region,
        n: usize,
        radius: f64,
        degree: u32,
    ) -> Result<Self, Error> {
        let (x3_lo, x3_hi) = (region.x3.0 + radius, region.x3.1 - radius);
        let (x4_lo, x4_hi) = (region.x4.0 + radius, region.x4.1 - radius);
        if !(x3_lo <= x3_hi && x4_lo <= x4_hi) {
            return Err(Error::SupportEscapesDomain {
                x3: 0.5 * (region.x3.0 + region.x3.1),
                x4: 0.5 * (region.x4.0 + region.x4.1),
                radius,
            });
        }
        let centers3 = if n <= 1 || x3_lo == x3_hi {
            vec![0.5 * (x3_lo + x3_hi)]
        } else {
            crate::sampler::linspace(x3_lo, x3_hi, n)
        };
        let centers4 = if n <= 1 || x4_lo == x4_hi {
            vec![0.5 * (x4_lo + x4_hi)]
        } else {
            crate::sampler::linspace(x4_lo, x4_hi, n)
        };
        let mut bumps = Vec::with_capacity(centers3.len() * centers4.len());
        for &c3 in &centers3 {
            for &c4 in &centers4 {
                bumps.push(Bump::new(c3, c4, radius, degree)?);
            }
        }
        Ok(TestFunctionFamily { bumps })
    }
}

/// Push `v` into `nodes` if it lies strictly inside `(lo, hi)`.
fn push_interior(nodes: &mut Vec<f64>, v: f64, lo: f64, hi: f64) {
    if v.is_finite() && v > lo && v < hi {
        nodes.push(v);
    }
}

/// Sorted panel boundaries from endpoints plus interior break candidates.
fn panels(lo: f64, hi: f64, mut interior: Vec<f64>) -> Vec<f64> {
    interior.retain(|v| v.is_finite() && *v > lo && *v < hi);
    interior.sort_by(|a, b| a.partial_cmp(b).expect("finite by construction"));
    let mut nodes = Vec::with_capacity(interior.len() + 2);
    nodes.push(lo);
    let scale = (hi - lo).abs().max(1.0);
    for v in interior {
        if v - nodes.last().expect("non-empty") > 1e-12 * scale {
            nodes.push(v);
        }
    }
    nodes.push(hi);
    nodes
}

/// The two `x4` values (if any) where the line `k*x3 - x4 = u` meets the
/// circle of radius `r` around `(c3, c4)`. These are the only points where
/// the kink can enter or leave a bump's support, so the outer integral is
/// split there.
fn oblique_circle_crossings(k: f64, u: f64, c3: f64, c4: f64, r: f64) -> Vec<f64> {
    // Substitute x3 = (x4 + u)/k into (x3-c3)^2 + (x4-c4)^2 = r^2 and
    // multiply by k^2.
    let a = 1.0 + k * k;
    let b = 2.0 * ((u - k * c3) - k * k * c4);
    let c = (u - k * c3) * (u - k * c3) + k * k * (c4 * c4 - r * r);
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    // Cancellation-stable quadratic roots.
    let q = -0.5 * (b + b.signum() * sq);
    let mut roots = vec![q / a];
    if q != 0.0 {
        roots.push(c / q);
    }
    roots
}

/// Weak-form check: for each bump `h`, computes `I3 = integral of G d3(h)`
/// and `I4 = integral of G d4(h)` and requires `I3^2 <= 2 I4 + tol`.
///
/// Quadrature is piecewise tensor Gauss-Legendre of the given order. The
/// outer `x4` integral runs over the support diameter and is split at
/// every declared constant-`x4` kink or jump level and at the points where
/// an oblique kink line enters or leaves the support disk; the inner `x3`
/// integral runs over the chord of the disk and is split at oblique kink
/// crossings and at constant-`x3` jump levels. Within each panel the
/// integrand is then a product of a polynomial (the bump) and a smooth or
/// piecewise-affine `G`, which the rule integrates essentially exactly.
pub fn pdi_distributional(
    graph: &GraphFunction,
    kinks: &[KinkLine],
    family: &TestFunctionFamily,
    order: usize,
    tol: f64,
) -> Result<ValidationReport, Error> {
    let rule = gauss_legendre(order.max(2));
    let mut rep = ValidationReport::new("pdi_distributional");
    for bump in family.bumps() {
        let (c3, c4, r) = (bump.center3, bump.center4, bump.radius);

        let mut outer_breaks = Vec::new();
        for kink in kinks {
            match *kink {
                KinkLine::ConstX4 { level } => {
                    push_interior(&mut outer_breaks, level, c4 - r, c4 + r)
                }
                KinkLine::Oblique { k, u } => {
                    if k == 0.0 {
                        push_interior(&mut outer_breaks, -u, c4 - r, c4 + r);
                    } else {
                        for x4 in oblique_circle_crossings(k, u, c3, c4, r) {
                            push_interior(&mut outer_breaks, x4, c4 - r, c4 + r);
                        }
                    }
                }
            }
        }
        for seg in graph.jump_segments() {
            if seg.axis == SegmentAxis::ConstX4
                && seg.intersects_region(c3 - r, c3 + r, c4 - r, c4 + r)
            {
                push_interior(&mut outer_breaks, seg.level, c4 - r, c4 + r);
            }
        }
        let outer_nodes = panels(c4 - r, c4 + r, outer_breaks);

        let mut i3 = 0.0;
        let mut i4 = 0.0;
        let mut mass = 0.0;
        for w in outer_nodes.windows(2) {
            let (a4, b4) = (w[0], w[1]);
            let mid4 = 0.5 * (a4 + b4);
            let half4 = 0.5 * (b4 - a4);
            for &(t4, wt4) in &rule {
                let x4 = mid4 + half4 * t4;
                let chord_sq = r * r - (x4 - c4) * (x4 - c4);
                if chord_sq <= 0.0 {
                    continue;
                }
                let half_chord = chord_sq.sqrt();
                let (lo3, hi3) = (c3 - half_chord, c3 + half_chord);

                let mut inner_breaks = Vec::new();
                for kink in kinks {
                    if let KinkLine::Oblique { k, u } = *kink {
                        if k != 0.0 {
                            push_interior(&mut inner_breaks, (x4 + u) / k, lo3, hi3);
                        }
                    }
                }
                for seg in graph.jump_segments() {
                    if seg.axis == SegmentAxis::ConstX3 && x4 > seg.lo && x4 < seg.hi {
                        push_interior(&mut inner_breaks, seg.level, lo3, hi3);
                    }
                }
                let inner_nodes = panels(lo3, hi3, inner_breaks);

                for win in inner_nodes.windows(2) {
                    let (a3, b3) = (win[0], win[1]);
                    let mid3 = 0.5 * (a3 + b3);
                    let half3 = 0.5 * (b3 - a3);
                    for &(t3, wt3) in &rule {
                        let x3 = mid3 + half3 * t3;
                        let dx3 = x3 - c3;
                        let dx4 = x4 - c4;
                        // Outside (or on) the support circle both h and its
                        // gradient vanish: skip before touching G, whose
                        // value there may legitimately be infinite.
                        if dx3 * dx3 + dx4 * dx4 >= r * r {
                            continue;
                        }
                        let g = match graph.eval(x3, x4) {
                            ExtReal::Finite(v) if v.is_finite() => v,
                            _ => {
                                return Err(Error::SupportEscapesDomain {
                                    x3,
                                    x4,
                                    radius: r,
                                })
                            }
                        };
                        let wgt = wt4 * half4 * wt3 * half3;
                        i3 += wgt * g * bump.d3(x3, x4);
                        i4 += wgt * g * bump.d4(x3, x4);
                        mass += wgt * bump.eval(x3, x4);
                    }
                }
            }
        }

        rep.samples += 1;
        if (mass - 1.0).abs() > tolerances::QUADRATURE {
            rep.violation(
                vec![c3, c4, r],
                mass,
                1.0,
                "bump quadrature mass deviates from 1: rule unreliable here",
            );
        }
        let residual = i3 * i3 - 2.0 * i4;
        rep.observe(residual);
        if residual > tol {
            rep.violation(
                vec![c3, c4, r],
                residual,
                tol,
                "weak differential inequality exceeded",
            );
        }
    }
    rep.truncate_violations(16);
    Ok(rep)
}

/// [`pdi_distributional`] with the graph and kink lines taken from a set
/// description.
pub fn pdi_distributional_spec(
    spec: &CalibratedSetSpec,
    family: &TestFunctionFamily,
    order: usize,
    tol: f64,
) -> Result<ValidationReport, Error> {
    pdi_distributional(&spec.graph(), &spec.kink_lines(), family, order, tol)
}

/// Structural condition on declared jumps: each jump segment must lie in a
/// plane `{x4 = const}` (the discontinuity set of a monotone graph can
/// only stack in the `x4` direction), and the value below must not be
/// smaller than the value above, since the graph can only step downward as
/// `x4` grows.
pub fn check_jump_condition(graph: &GraphFunction) -> ValidationReport {
    let mut rep = ValidationReport::new("jump_condition");
    for seg in graph.jump_segments() {
        rep.samples += 1;
        if seg.axis != SegmentAxis::ConstX4 {
            rep.violation(
                vec![seg.level],
                seg.level,
                f64::NAN,
                "jump segment is not parallel to the x3-axis",
            );
            continue;
        }
        if seg.value_below < seg.value_above - tolerances::ALGEBRAIC {
            rep.violation(
                vec![seg.level, seg.value_below, seg.value_above],
                seg.value_below - seg.value_above,
                0.0,
                "upward jump in the x4 direction contradicts monotonicity",
            );
        }
    }
    if rep.samples == 0 {
        rep.note("no declared jump segments to check");
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_fn::JumpSegment;
    use crate::pwl::PiecewiseLinear;
    use approx::assert_relative_eq;

    fn cone_region() -> Region {
        Region::new((-1.0, 1.0), (1.0, 2.0)).unwrap()
    }

    #[test]
    fn region_rejects_bad_bounds() {
        assert!(Region::new((1.0, 1.0), (0.0, 1.0)).is_err());
        assert!(Region::new((0.0, f64::INFINITY), (0.0, 1.0)).is_err());
        assert!(Region::new((0.0, 1.0), (2.0, 1.0)).is_err());
    }

    #[test]
    fn cone_graph_satisfies_the_identity_to_extrapolation_error() {
        let rep = pdi_pointwise_spec(
            &CalibratedSetSpec::cone(),
            &cone_region(),
            41,
            tolerances::FD_STEP,
            tolerances::PDI,
        )
        .unwrap();
        assert!(rep.pass, "{:?}", rep.violations.first());
        // Analytic residual is identically zero; only the h^4 truncation
        // term remains.
        assert!(rep.observed_abs_max().unwrap() < 1e-8);
    }

    #[test]
    fn affine_graph_has_residual_minus_one() {
        // G = x3 - x4: d3 = 1, d4 = -1, residual = 1 - 2 = -1.
        let f = PiecewiseLinear::new(vec![(-50.0, -50.0), (50.0, 50.0)]).unwrap();
        let spec = CalibratedSetSpec::fgk(f, PiecewiseLinear::constant(0.0), 1.0).unwrap();
        let region = Region::new((-2.0, 2.0), (-2.0, 2.0)).unwrap();
        let rep = pdi_pointwise_spec(&spec, &region, 21, 1e-3, tolerances::PDI).unwrap();
        assert!(rep.pass);
        assert_relative_eq!(rep.worst.unwrap(), -1.0, max_relative = 1e-9);
        assert_relative_eq!(rep.observed_min.unwrap(), -1.0, max_relative = 1e-9);
    }

    #[test]
    fn constant_graph_has_zero_residual() {
        let spec = CalibratedSetSpec::half_space(crate::sets::HalfSpaceAxis::X2, 3.0).unwrap();
        let region = Region::new((-5.0, 5.0), (-5.0, 5.0)).unwrap();
        let rep = pdi_pointwise_spec(&spec, &region, 11, 1e-3, tolerances::PDI).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.observed_abs_max().unwrap(), 0.0);
    }

    #[test]
    fn jump_inside_region_is_a_precondition_failure() {
        let g = PiecewiseLinear::new(vec![(-1.0, 1.0), (0.0, 1.0), (0.0, 0.0), (1.0, 0.0)])
            .unwrap();
        let spec = CalibratedSetSpec::monotone_g(g);
        let region = Region::new((-1.0, 1.0), (-0.5, 0.5)).unwrap();
        let err = pdi_pointwise_spec(&spec, &region, 11, 1e-3, 1e-8).unwrap_err();
        assert!(matches!(err, Error::RegionContainsJump { .. }));
    }

    #[test]
    fn infinite_value_inside_region_is_reported() {
        let region = Region::new((-1.0, 1.0), (-1.0, 1.0)).unwrap();
        let err =
            pdi_pointwise_spec(&CalibratedSetSpec::cone(), &region, 11, 1e-3, 1e-8).unwrap_err();
        match err {
            Error::RegionContainsInfinite { x4, .. } => assert!(x4 <= 0.0 + 1e-3),
            other => panic!("expected infinite-value error, got {other:?}"),
        }
    }

    #[test]
    fn kink_stencils_are_skipped_and_pwl_residual_is_exact() {
        // Admissible profile with a kink: slopes 0.4 then 0.1 against
        // budget 2/k^2 = 2 at k = 1. Away from the kink the pieces are
        // affine, so Richardson differences are exact and the residual is
        // (k^2 f' - 2) f' + 2 g' < 0 exactly.
        let f = PiecewiseLinear::new(vec![(-20.0, 0.0), (0.0, 8.0), (20.0, 10.0)]).unwrap();
        let spec = CalibratedSetSpec::fgk(f, PiecewiseLinear::constant(0.0), 1.0).unwrap();
        let region = Region::new((-2.0, 2.0), (-2.0, 2.0)).unwrap();
        let rep = pdi_pointwise_spec(&spec, &region, 41, 1e-3, 1e-8).unwrap();
        assert!(rep.pass, "{:?}", rep.violations.first());
        assert!(rep.notes.iter().any(|n| n.contains("skipped")));
        // Residuals are exactly (f'-2)f' for f' in {0.4, 0.1}: -0.64, -0.19.
        let worst = rep.worst.unwrap();
        assert_relative_eq!(worst, -0.19, max_relative = 1e-10);
    }

    #[test]
    fn bump_mass_and_support() {
        let b = Bump::new(0.3, -0.2, 0.7, 4).unwrap();
        // Quadrature of the bump itself over its support, split at nothing:
        // the chord construction keeps everything inside the disk.
        let rule = gauss_legendre(32);
        let mut mass = 0.0;
        for &(t4, w4) in &rule {
            let x4 = -0.2 + 0.7 * t4;
            let chord = (0.49 - (x4 + 0.2) * (x4 + 0.2)).max(0.0).sqrt();
            for &(t3, w3) in &rule {
                let x3 = 0.3 + chord * t3;
                mass += w4 * 0.7 * w3 * chord * b.eval(x3, x4);
            }
        }
        assert_relative_eq!(mass, 1.0, max_relative = 1e-9);
        assert_eq!(b.eval(0.3 + 0.71, -0.2), 0.0);
        assert_eq!(b.d3(0.3, -0.2 - 0.71), 0.0);
        assert!(b.eval(0.3, -0.2) > 0.0);
        assert!(Bump::new(0.0, 0.0, 0.0, 4).is_err());
        assert!(Bump::new(0.0, 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn affine_graph_weak_form_has_unit_slack() {
        // G = x3 - x4: integration by parts gives I3 = -1, I4 = +1, so
        // I3^2 = 1 <= 2 = 2*I4 with slack exactly 1.
        let f = PiecewiseLinear::new(vec![(-50.0, -50.0), (50.0, 50.0)]).unwrap();
        let spec = CalibratedSetSpec::fgk(f, PiecewiseLinear::constant(0.0), 1.0).unwrap();
        let family = TestFunctionFamily::new(vec![
            Bump::new(0.0, 0.0, 0.5, 4).unwrap(),
            Bump::new(1.0, -0.5, 0.3, 4).unwrap(),
        ]);
        let rep = pdi_distributional_spec(&spec, &family, 32, tolerances::QUADRATURE).unwrap();
        assert!(rep.pass, "{:?}", rep.violations.first());
        assert_relative_eq!(rep.worst.unwrap(), -1.0, epsilon = 1e-9);
    }

    #[test]
    fn cone_weak_form_passes() {
        let region = Region::new((-1.0, 1.0), (1.0, 3.0)).unwrap();
        let family = TestFunctionFamily::grid_in_region(&region, 3, 0.3, 4).unwrap();
        let rep = pdi_distributional_spec(
            &CalibratedSetSpec::cone(),
            &family,
            32,
            tolerances::QUADRATURE,
        )
        .unwrap();
        assert!(rep.pass, "{:?}", rep.violations.first());
    }

    #[test]
    fn step_graph_weak_form_spans_the_jump() {
        // Downward step at x4 = 0: G = 1 below, 0 above. Bump centered on
        // the jump line. I4 = -integral(d4 G h) picks up the positive
        // jump mass; I3 = 0 by symmetry in x3. Inequality holds strictly.
        let g = PiecewiseLinear::new(vec![(-2.0, 1.0), (0.0, 1.0), (0.0, 0.0), (2.0, 0.0)])
            .unwrap();
        let spec = CalibratedSetSpec::monotone_g(g);
        let family = TestFunctionFamily::new(vec![Bump::new(0.0, 0.0, 0.5, 4).unwrap()]);
        let rep = pdi_distributional_spec(&spec, &family, 32, tolerances::QUADRATURE).unwrap();
        assert!(rep.pass, "{:?}", rep.violations.first());
        // I3 = 0 and I4 = h-line-integral of the jump size > 0, so the
        // residual is strictly negative.
        assert!(rep.worst.unwrap() < -0.5);
    }

    #[test]
    fn upward_step_weak_form_is_falsified() {
        // An upward step violates monotone structure; the weak form must
        // catch it: I4 < 0 while I3 = 0.
        let graph = GraphFunction::new(
            |_x3, x4| {
                ExtReal::Finite(if x4 > 0.0 { 1.0 } else { 0.0 })
            },
            vec![JumpSegment::full_line_x4(0.0, 0.0, 1.0)],
            ExtReal::PosInf,
        );
        let family = TestFunctionFamily::new(vec![Bump::new(0.0, 0.0, 0.5, 4).unwrap()]);
        let rep =
            pdi_distributional(&graph, &[], &family, 32, tolerances::QUADRATURE).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn support_touching_infinite_region_is_an_error() {
        // Cone graph is +inf for x4 <= 0; a bump across the axis escapes.
        let family = TestFunctionFamily::new(vec![Bump::new(0.0, 0.1, 0.5, 4).unwrap()]);
        let err = pdi_distributional_spec(
            &CalibratedSetSpec::cone(),
            &family,
            32,
            tolerances::QUADRATURE,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SupportEscapesDomain { .. }));
    }

    #[test]
    fn family_grid_insets_by_radius() {
        let region = Region::new((0.0, 2.0), (0.0, 2.0)).unwrap();
        let family = TestFunctionFamily::grid_in_region(&region, 3, 0.4, 4).unwrap();
        assert_eq!(family.bumps().len(), 9);
        for b in family.bumps() {
            assert!(b.center3 >= 0.4 && b.center3 <= 1.6);
            assert!(b.center4 >= 0.4 && b.center4 <= 1.6);
        }
        assert!(matches!(
            TestFunctionFamily::grid_in_region(&region, 3, 1.5, 4),
            Err(Error::SupportEscapesDomain { .. })
        ));
        let single = TestFunctionFamily::grid_in_region(&region, 1, 0.4, 4).unwrap();
        assert_eq!(single.bumps().len(), 1);
        assert_eq!(
            (single.bumps()[0].center3, single.bumps()[0].center4),
            (1.0, 1.0)
        );
    }

    #[test]
    fn jump_condition_checks_axis_and_direction() {
        let good = GraphFunction::new(
            |_x3, x4| ExtReal::Finite(if x4 > 1.0 { 0.0 } else { 2.0 }),
            vec![JumpSegment::full_line_x4(1.0, 2.0, 0.0)],
            ExtReal::PosInf,
        );
        assert!(check_jump_condition(&good).pass);

        let wrong_axis = GraphFunction::new(
            |_x3, _x4| ExtReal::Finite(0.0),
            vec![JumpSegment {
                axis: SegmentAxis::ConstX3,
                level: 0.0,
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
                value_below: 0.0,
                value_above: 0.0,
            }],
            ExtReal::PosInf,
        );
        assert!(!check_jump_condition(&wrong_axis).pass);

        let upward = GraphFunction::new(
            |_x3, x4| ExtReal::Finite(if x4 > 1.0 { 2.0 } else { 0.0 }),
            vec![JumpSegment::full_line_x4(1.0, 0.0, 2.0)],
            ExtReal::PosInf,
        );
        assert!(!check_jump_condition(&upward).pass);

        let no_jumps = GraphFunction::smooth(|_x3, _x4| 0.0);
        assert!(check_jump_condition(&no_jumps).pass);
    }

    #[test]
    fn oblique_circle_crossing_geometry() {
        // Line x3 = x4 (k=1, u=0) through the unit circle at the origin:
        // crossings at x4 = +/- 1/sqrt(2).
        let mut xs = oblique_circle_crossings(1.0, 0.0, 0.0, 0.0, 1.0);
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(xs.len(), 2);
        assert_relative_eq!(xs[0], -std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_relative_eq!(xs[1], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        // Line far from the circle: no crossings.
        assert!(oblique_circle_crossings(1.0, 10.0, 0.0, 0.0, 1.0).is_empty());
    }

    #[test]
    fn random_admissible_families_pass_both_forms() {
        let mut rng = crate::sampler::seeded_rng(11);
        for _ in 0..10 {
            let spec = CalibratedSetSpec::sample_fgk(&mut rng);
            let region = Region::new((-2.0, 2.0), (-0.5, 4.5)).unwrap();
            let rep = pdi_pointwise_spec(&spec, &region, 21, 1e-3, 1e-8).unwrap();
            assert!(rep.pass, "pointwise: {:?}", rep.violations.first());

            let family = TestFunctionFamily::grid_in_region(&region, 2, 0.45, 4).unwrap();
            let wrep = pdi_distributional_spec(&spec, &family, 32, 1e-6).unwrap();
            assert!(wrep.pass, "weak: {:?}", wrep.violations.first());
        }
    }

    #[test]
    fn over_budget_profile_is_falsified_pointwise() {
        let mut rng = crate::sampler::seeded_rng(3);
        let spec = CalibratedSetSpec::sample_fgk_invalid(&mut rng);
        let region = Region::new((-2.0, 2.0), (-0.5, 4.5)).unwrap();
        let rep = pdi_pointwise_spec(&spec, &region, 21, 1e-3, 1e-8).unwrap();
        assert!(!rep.pass, "slope 4/k^2 must violate the inequality");
    }
}
