//! Orchestration behind the command-line interface. Each subcommand body
//! lives here, takes a resolved [`RunConfig`], and returns an [`Outcome`],
//! so the whole surface can be driven and tested without spawning a
//! process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{fnv1a_64, RunConfig};
use crate::filiform::{
    half_space_reduction_filiform, vandermonde_basis, BasisReport, FiliformAlgebra,
};
use crate::intrinsic::{
    cone_t_closed_form, demonstrate_discontinuity, holder_bound_check, holder_constant,
    intrinsic_t_auto, lipschitz_blowup_exponent, DiscontinuityReport, ExponentFit,
    IntrinsicQuery,
};
use crate::monotone::{check_monotone_direction, check_x2_monotone, cone_inclusion, conjugated_x2};
use crate::pdi::{
    check_jump_condition, pdi_distributional_spec, pdi_pointwise_spec, Bump, Region,
    TestFunctionFamily,
};
use crate::point::{flow, Point};
use crate::pwl::PiecewiseLinear;
use crate::rectify::{
    cone_aperture_bound, euclidean_cone_slopes, extract_rotated_graph, half_space_reduction_x1,
    GraphingDirection, SymbolicReport,
};
use crate::report::ValidationReport;
use crate::sampler::{linspace, seeded_rng, SampleSpace};
use crate::sets::CalibratedSetSpec;
use crate::{tolerances, Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Wrapper written around every JSON report so each artifact names the
/// tool version, the seed, and the configuration it came from.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool_version: &'static str,
    pub seed: u64,
    pub config_hash: String,
    pub report: T,
}

fn envelope<T: Serialize>(cfg: &RunConfig, report: T) -> Envelope<T> {
    Envelope {
        tool_version: TOOL_VERSION,
        seed: cfg.seed,
        config_hash: cfg.hash.clone(),
        report,
    }
}

/// What a subcommand produced: a verdict, printable summary lines, and
/// the files written.
#[derive(Debug)]
pub struct Outcome {
    pub pass: bool,
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Config(format!("could not serialize {name}: {e}")))?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}

// ---------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ValidateReport {
    pub spec: String,
    pub all_pass: bool,
    pub checks: Vec<ValidationReport>,
}

/// Run every calibration validator against the configured set: structural
/// invariants, flow monotonicity (plain and conjugated directions), the
/// derivative inequality in both pointwise and distributional form, the
/// jump-direction condition, and cone inclusion at boundary points.
pub fn run_validate(cfg: &RunConfig) -> Result<Outcome> {
    let spec = &cfg.spec;
    let space = SampleSpace {
        seed: cfg.seed,
        count: cfg.samples,
        ..SampleSpace::default()
    };
    let mut checks: Vec<ValidationReport> = Vec::new();

    checks.push(spec.validate_invariants());
    checks.push(check_x2_monotone(spec, &space));
    for (i, s) in [-1.0, -0.25, 0.5, 1.0].into_iter().enumerate() {
        let space_s = SampleSpace {
            seed: cfg.seed.wrapping_add(1 + i as u64),
            ..space
        };
        let mut rep = check_monotone_direction(spec, conjugated_x2(s), &space_s);
        rep.check = format!("conjugated-monotone(s={s})");
        checks.push(rep);
    }

    let grid_n = cfg.grid.clamp(2, 201);
    match pdi_pointwise_spec(spec, &cfg.region, grid_n, tolerances::FD_STEP, cfg.tol_pdi) {
        Ok(rep) => checks.push(rep),
        Err(Error::RegionContainsJump { .. }) => {
            let mut rep = ValidationReport::new("pdi-pointwise");
            rep.note(
                "skipped: the region contains a declared jump; the distributional check covers it",
            );
            checks.push(rep);
        }
        Err(Error::RegionContainsInfinite { .. }) => {
            let mut rep = ValidationReport::new("pdi-pointwise");
            rep.note("skipped: the graph is infinite inside the region");
            checks.push(rep);
        }
        Err(e) => return Err(e),
    }

    let radius = 0.2
        * (cfg.region.x3.1 - cfg.region.x3.0).min(cfg.region.x4.1 - cfg.region.x4.0);
    let distributional = TestFunctionFamily::grid_in_region(
        &cfg.region,
        3,
        radius,
        Bump::DEFAULT_DEGREE,
    )
    .and_then(|family| pdi_distributional_spec(spec, &family, 32, cfg.tol_quad));
    match distributional {
        Ok(rep) => checks.push(rep),
        Err(Error::SupportEscapesDomain { .. }) | Err(Error::RegionContainsInfinite { .. }) => {
            let mut rep = ValidationReport::new("pdi-distributional");
            rep.note("skipped: the graph is infinite near the region");
            checks.push(rep);
        }
        Err(e) => return Err(e),
    }

    checks.push(check_jump_condition(&spec.graph()));
    checks.push(cone_inclusion(spec, &space, 8));

    let all_pass = checks.iter().all(|c| c.pass);
    let mut lines: Vec<String> = checks.iter().map(|c| c.summary_line()).collect();
    lines.push(format!(
        "validate: {} ({} checks)",
        if all_pass { "pass" } else { "FAIL" },
        checks.len()
    ));

    let mut files = Vec::new();
    if let Some(dir) = &cfg.out {
        let report = ValidateReport {
            spec: spec.describe(),
            all_pass,
            checks,
        };
        files.push(write_json(dir, "validate.json", &envelope(cfg, report))?);
    }
    Ok(Outcome {
        pass: all_pass,
        lines,
        files,
    })
}

// ---------------------------------------------------------------------
// graph
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct FitEntry {
    pub direction_a: f64,
    pub fit: ExponentFit,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub spec: String,
    pub directions: Vec<f64>,
    pub t_grid: usize,
    pub t_domain: [f64; 4],
    pub t_failures: usize,
    pub rotated_w: [f64; 4],
    pub rotated_n: usize,
    pub half_width: f64,
    pub lipschitz_hat: f64,
    pub misses: usize,
    pub blowup_fits: Vec<FitEntry>,
}

/// Log-spaced heights `-1e-1 .. -1e-6` for the blow-up fit.
fn blowup_heights() -> Vec<f64> {
    (0..=25)
        .map(|i| -(10.0_f64).powf(-1.0 - 5.0 * i as f64 / 25.0))
        .collect()
}

/// Export the intrinsic half-line boundary `T` on a grid of `(p3, p4)`
/// per configured direction slope, and the rotated-graph heights with
/// their empirical Lipschitz constant and the blow-up fit.
pub fn run_graph(cfg: &RunConfig) -> Result<Outcome> {
    let out_dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut lines = Vec::new();
    let mut files = Vec::new();

    // Intrinsic T samples over a fixed symmetric box: negative p4 is
    // where the boundary behavior is interesting.
    let t_domain = [-1.0, 1.0, -1.0, 1.0];
    let coords = linspace(t_domain[0], t_domain[1], cfg.grid);
    let mut t_csv = String::from("p3,p4,T,direction_a\n");
    let mut t_failures = 0usize;
    for &a in &cfg.directions {
        for &p3 in &coords {
            for &p4 in &coords {
                let query =
                    IntrinsicQuery::new(cfg.spec.clone(), a, Point::new(0.0, 0.0, p3, p4))?;
                let t = match intrinsic_t_auto(&query, cfg.tol_bisect) {
                    Ok(t) => t.to_f64(),
                    Err(Error::NonMonotoneMembership { .. }) => {
                        t_failures += 1;
                        f64::NAN
                    }
                    Err(e) => return Err(e),
                };
                let _ = writeln!(t_csv, "{p3},{p4},{t},{a}");
            }
        }
    }
    files.push(write_text(&out_dir, "t.csv", &t_csv)?);
    lines.push(format!(
        "t.csv: {} directions x {}^2 grid{}",
        cfg.directions.len(),
        cfg.grid,
        if t_failures > 0 {
            format!(", {t_failures} non-half-line fibers")
        } else {
            String::new()
        }
    ));

    let w = GraphingDirection::default_direction();
    let rotated = extract_rotated_graph(
        &cfg.spec,
        &w,
        cfg.half_width,
        cfg.grid,
        cfg.seed,
        tolerances::DEFAULT_BRACKET,
        cfg.tol_bisect,
    )?;
    let mut g_csv = String::from("u1,u2,u3,h,crossing_found\n");
    for s in &rotated.samples {
        let _ = writeln!(g_csv, "{},{},{},{},{}", s.u1, s.u2, s.u3, s.h, s.crossing_found);
    }
    files.push(write_text(&out_dir, "graph.csv", &g_csv)?);
    lines.push(format!(
        "graph.csv: {}^3 rays, empirical Lipschitz constant {}, {} misses",
        rotated.n, rotated.lipschitz_hat, rotated.misses
    ));

    let mut blowup_fits = Vec::new();
    for &a in &cfg.directions {
        if a == 0.0 {
            lines.push("blow-up fit skipped for a = 0".to_string());
            continue;
        }
        let fit = lipschitz_blowup_exponent(a, &blowup_heights())?;
        lines.push(format!(
            "blow-up fit (a = {a}): slope {:.6}, r^2 {:.8}",
            fit.slope, fit.r_squared
        ));
        blowup_fits.push(FitEntry {
            direction_a: a,
            fit,
        });
    }

    let summary = GraphSummary {
        spec: cfg.spec.describe(),
        directions: cfg.directions.clone(),
        t_grid: cfg.grid,
        t_domain,
        t_failures,
        rotated_w: rotated.w,
        rotated_n: rotated.n,
        half_width: rotated.half_width,
        lipschitz_hat: rotated.lipschitz_hat,
        misses: rotated.misses,
        blowup_fits,
    };
    files.push(write_json(&out_dir, "graph_summary.json", &envelope(cfg, summary))?);

    Ok(Outcome {
        pass: t_failures == 0,
        lines,
        files,
    })
}

// ---------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct DirectionAnalysis {
    pub direction_a: f64,
    pub holder_k: f64,
    pub bound_check: ValidationReport,
    pub blowup: ExponentFit,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub directions: Vec<DirectionAnalysis>,
    pub aperture_bound: f64,
    pub euclidean_cone: crate::rectify::ConeDescription,
    pub reduction: SymbolicReport,
    pub all_pass: bool,
}

/// Regularity analysis of the extremal cone: per configured slope `a`,
/// the numeric two-scale constant `K*(a)`, a grid check that
/// `T <= K* max(sqrt|p3|, cbrt|p4|)`, and the blow-up exponent fit; plus
/// the aperture bound for the default graphing direction, the Euclidean
/// cone constants, and the symbolic half-space reduction.
pub fn run_analyze(cfg: &RunConfig) -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut directions = Vec::new();
    let mut all_pass = true;

    let coords = linspace(-1.0, 1.0, cfg.grid);
    let mut grid_samples = Vec::with_capacity(coords.len() * coords.len());
    for &p3 in &coords {
        for &p4 in &coords {
            grid_samples.push((p3, p4));
        }
    }

    for &a in &cfg.directions {
        if a == 0.0 {
            lines.push("analyze skipped for a = 0 (no horizontal tilt)".to_string());
            continue;
        }
        let holder_k = holder_constant(a, 3)?;
        let bound_check = holder_bound_check(a, holder_k, &grid_samples, cfg.tol_bisect)?;
        let blowup = lipschitz_blowup_exponent(a, &blowup_heights())?;
        all_pass &= bound_check.pass;
        lines.push(format!(
            "a = {a}: K* = {holder_k:.9}, bound check {} on {} samples, blow-up slope {:.6}",
            if bound_check.pass { "pass" } else { "FAIL" },
            bound_check.samples,
            blowup.slope
        ));
        directions.push(DirectionAnalysis {
            direction_a: a,
            holder_k,
            bound_check,
            blowup,
        });
    }

    let w = GraphingDirection::default_direction();
    let aperture = cone_aperture_bound(&w, 2000, 3);
    lines.push(format!("aperture bound for the default direction: {aperture:.9}"));

    let fan: Vec<(f64, f64)> = (1..8)
        .map(|k| {
            let theta = std::f64::consts::PI * k as f64 / 8.0;
            (theta.cos(), theta.sin())
        })
        .collect();
    let euclidean_cone = euclidean_cone_slopes(&fan)?;
    let reduction = half_space_reduction_x1();
    lines.push(format!(
        "half-space reduction: invariants {:?}",
        reduction.invariants
    ));

    let mut files = Vec::new();
    let report = AnalyzeReport {
        directions,
        aperture_bound: aperture,
        euclidean_cone,
        reduction,
        all_pass,
    };
    if let Some(dir) = &cfg.out {
        files.push(write_json(dir, "analyze.json", &envelope(cfg, report))?);
    }
    lines.push(format!("analyze: {}", if all_pass { "pass" } else { "FAIL" }));
    Ok(Outcome {
        pass: all_pass,
        lines,
        files,
    })
}

// ---------------------------------------------------------------------
// filiform
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct FiliformReport {
    pub step: usize,
    pub ts: Vec<f64>,
    /// Rows of adjoint coefficients, one per parameter.
    pub adjoint_rows: Vec<Vec<f64>>,
    pub basis: BasisReport,
    pub reduction: SymbolicReport,
}

/// Filiform checks for a given step: the adjoint expansion rows at the
/// requested parameters, the Vandermonde determinant with its rank
/// verdict, and the half-space reduction chain. Rank deficiency is a
/// reported verdict, not a failure.
pub fn run_filiform(step: usize, ts: Option<Vec<f64>>, out: Option<&Path>) -> Result<Outcome> {
    if step < 2 {
        return Err(Error::InvalidParameter(format!(
            "step must be at least 2, got {step}"
        )));
    }
    let algebra = FiliformAlgebra::new(step)?;
    let ts = ts.unwrap_or_else(|| (0..step).map(|k| k as f64).collect());
    let basis = vandermonde_basis(&algebra, &ts)?;
    let reduction = half_space_reduction_filiform(&algebra);

    let adjoint_rows: Vec<Vec<f64>> = ts.iter().map(|&t| algebra.adjoint(t)).collect();
    let mut lines = Vec::new();
    for (t, row) in ts.iter().zip(&adjoint_rows) {
        let terms: Vec<String> = row
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(k, &c)| format!("{c} X{k}"))
            .collect();
        lines.push(format!("Ad(exp({t} X0)) X1 = {}", terms.join(" + ")));
    }
    lines.push(format!(
        "determinant = {} (product formula {}), rank: {}",
        basis.determinant,
        basis.product_formula,
        if basis.full_rank {
            "full"
        } else {
            "deficient"
        }
    ));
    lines.push(format!(
        "reduction invariants: {}",
        reduction.invariants.join(", ")
    ));

    let report = FiliformReport {
        step,
        ts: ts.clone(),
        adjoint_rows,
        basis,
        reduction,
    };
    let mut files = Vec::new();
    if let Some(dir) = out {
        let args_text = format!(
            "step = {step}\nts = {}",
            ts.iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
        let env = Envelope {
            tool_version: TOOL_VERSION,
            seed: 0,
            config_hash: format!("{:016x}", fnv1a_64(args_text.as_bytes())),
            report,
        };
        files.push(write_json(dir, "filiform.json", &env)?);
    }
    Ok(Outcome {
        pass: true,
        lines,
        files,
    })
}

// ---------------------------------------------------------------------
// demo
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct RotatedSummary {
    pub lipschitz_hat: f64,
    pub misses: usize,
    pub aperture_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoReport {
    pub flow_worst_error: f64,
    pub cone_pdi: ValidationReport,
    pub unit_crossing_error: f64,
    pub blowup: ExponentFit,
    pub holder_k: f64,
    pub discontinuity: DiscontinuityReport,
    pub declared_jumps_matched: bool,
    pub rotated: RotatedSummary,
    pub filiform: BasisReport,
    pub all_pass: bool,
}

/// Reproduce the worked examples end to end: the tilted-flow closed form,
/// the cone's vanishing derivative residual, the unit crossing time at
/// `p4 = -1/24`, the cube-root blow-up, the step-profile discontinuity of
/// the configured set, the rotated Lipschitz graph against its aperture
/// bound, and the step-3 filiform basis.
pub fn run_demo(cfg: &RunConfig) -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut all_pass = true;

    // Tilted flow: closed form against the displayed quartet.
    let mut rng = seeded_rng(cfg.seed);
    let mut flow_worst = 0.0_f64;
    for _ in 0..200 {
        use rand::Rng;
        let p = Point::new(
            rng.random_range(-2.0..=2.0),
            rng.random_range(-2.0..=2.0),
            rng.random_range(-2.0..=2.0),
            rng.random_range(-2.0..=2.0),
        );
        let a = rng.random_range(-2.0..=2.0);
        let t = rng.random_range(-2.0..=2.0);
        let q = flow(p, crate::algebra::TangentVector::new(a, 1.0, 0.0, 0.0), t);
        let expected = Point::new(
            p.x1 + a * t,
            p.x2 + t,
            p.x3 + p.x1 * t + a * t * t / 2.0,
            p.x4 + p.x1 * p.x1 * t / 2.0 + a * p.x1 * t * t / 2.0 + a * a * t * t * t / 6.0,
        );
        flow_worst = flow_worst.max(q.max_diff(expected));
    }
    all_pass &= flow_worst <= tolerances::ALGEBRAIC;
    lines.push(format!("tilted flow quartet: worst error {flow_worst:.3e}"));

    // The cone's derivative identity.
    let region = Region::new((-2.0, 2.0), (0.5, 4.0)).expect("demo region is valid");
    let cone_pdi = pdi_pointwise_spec(
        &CalibratedSetSpec::cone(),
        &region,
        41,
        tolerances::FD_STEP,
        tolerances::QUADRATURE,
    )?;
    all_pass &= cone_pdi.pass;
    lines.push(format!(
        "cone derivative identity: residual at most {:.3e}",
        cone_pdi.observed_abs_max().unwrap_or(0.0)
    ));

    // Unit crossing time and blow-up exponent.
    let unit_crossing_error = (cone_t_closed_form(1.0, 0.0, -1.0 / 24.0)? - 1.0).abs();
    all_pass &= unit_crossing_error <= 1e-8;
    let blowup = lipschitz_blowup_exponent(1.0, &blowup_heights())?;
    all_pass &= (blowup.slope - 1.0 / 3.0).abs() <= 0.02;
    let holder_k = holder_constant(1.0, 3)?;
    lines.push(format!(
        "crossing at p4 = -1/24: error {unit_crossing_error:.3e}; blow-up slope {:.6}; K*(1) = {holder_k:.9}",
        blowup.slope
    ));

    // Discontinuity of the configured (or default) step profile.
    let g = match &cfg.spec {
        CalibratedSetSpec::MonotoneG { g } => g.clone(),
        _ => PiecewiseLinear::new(vec![(-1.0, 1.0), (0.0, 1.0), (0.0, 0.0), (1.0, 0.0)])
            .expect("default step profile is valid"),
    };
    let span = g
        .breakpoints()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| {
            (lo.min(x), hi.max(x))
        });
    let range = (span.0 - 1.0, span.1 + 1.0);
    let n = cfg.grid.max(16);
    let discontinuity = demonstrate_discontinuity(&g, range, n, 1e-3)?;
    let resolution = (range.1 - range.0) / (n - 1) as f64;
    let mut matched = true;
    for declared in &discontinuity.declared {
        let size = declared.left - declared.right;
        let hit = discontinuity.jumps.iter().any(|j| {
            (j.location - declared.x).abs() <= resolution + 1e-6
                && (j.size - size).abs() <= 1e-3
        });
        if !hit {
            matched = false;
        }
        lines.push(format!(
            "declared jump at p4 = {} of size {size}: {}",
            declared.x,
            if hit { "detected" } else { "MISSED" }
        ));
    }
    for j in &discontinuity.jumps {
        lines.push(format!(
            "detected jump at p4 = {} (size {}, grid resolution {resolution})",
            j.location, j.size
        ));
    }
    all_pass &= matched;

    // Rotated graph against the aperture bound.
    let w = GraphingDirection::default_direction();
    let rotated = extract_rotated_graph(
        &CalibratedSetSpec::cone(),
        &w,
        1.0,
        15,
        cfg.seed,
        tolerances::DEFAULT_BRACKET,
        cfg.tol_bisect,
    )?;
    let aperture = cone_aperture_bound(&w, 800, 3);
    let rotated_ok = rotated.misses == 0 && rotated.lipschitz_hat <= aperture * 1.01;
    all_pass &= rotated_ok;
    lines.push(format!(
        "rotated cone graph: empirical Lipschitz constant {} vs aperture bound {aperture:.6} ({})",
        rotated.lipschitz_hat,
        if rotated_ok { "ok" } else { "FAIL" }
    ));

    // Step-3 filiform basis.
    let algebra = FiliformAlgebra::new(3)?;
    let filiform = vandermonde_basis(&algebra, &[0.0, 1.0, 2.0])?;
    let filiform_ok = filiform.full_rank && (filiform.scaled_vandermonde - 2.0).abs() <= 1e-9;
    all_pass &= filiform_ok;
    lines.push(format!(
        "step-3 filiform basis: scaled Vandermonde {} ({})",
        filiform.scaled_vandermonde,
        if filiform_ok { "ok" } else { "FAIL" }
    ));

    let report = DemoReport {
        flow_worst_error: flow_worst,
        cone_pdi,
        unit_crossing_error,
        blowup,
        holder_k,
        discontinuity,
        declared_jumps_matched: matched,
        rotated: RotatedSummary {
            lipschitz_hat: rotated.lipschitz_hat,
            misses: rotated.misses,
            aperture_bound: aperture,
        },
        filiform,
        all_pass,
    };
    let mut files = Vec::new();
    if let Some(dir) = &cfg.out {
        files.push(write_json(dir, "demo.json", &envelope(cfg, report))?);
    }
    lines.push(format!("demo: {}", if all_pass { "pass" } else { "FAIL" }));
    Ok(Outcome {
        pass: all_pass,
        lines,
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_text;
    use std::collections::BTreeMap;

    fn cfg_from(text: &str) -> RunConfig {
        RunConfig::from_map(parse_config_text(text).unwrap()).unwrap()
    }

    fn small(text: &str) -> RunConfig {
        let mut c = cfg_from(text);
        c.samples = 400;
        c.grid = 9;
        c
    }

    #[test]
    fn validate_passes_for_the_cone_and_fails_for_an_increasing_profile() {
        let out = run_validate(&small("variant = cone")).unwrap();
        assert!(out.pass, "{:?}", out.lines);

        // An increasing profile is not calibrated; the validators produce
        // witnesses rather than errors.
        let c = small("variant = monotone_g\ng = -1:0, 1:1");
        let out = run_validate(&c).unwrap();
        assert!(!out.pass);
    }

    #[test]
    fn validate_handles_a_step_profile_via_the_distributional_route() {
        let c = small("variant = monotone_g\ng = -1:1, 0:1, 0:0, 1:0\nregion = -1, 1, -0.5, 0.5");
        let out = run_validate(&c).unwrap();
        assert!(out.pass, "{:?}", out.lines);
        assert!(out
            .lines
            .iter()
            .any(|l| l.contains("pdi-pointwise") && l.contains("skipped")));
    }

    #[test]
    fn graph_writes_deterministic_csv() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = small("variant = cone\nseed = 3");
        c.grid = 5;
        c.out = Some(dir.path().join("one"));
        let first = run_graph(&c).unwrap();
        assert!(first.pass);
        c.out = Some(dir.path().join("two"));
        let second = run_graph(&c).unwrap();
        for (a, b) in first.files.iter().zip(second.files.iter()) {
            if a.extension().is_some_and(|e| e == "csv") {
                let ta = std::fs::read(a).unwrap();
                let tb = std::fs::read(b).unwrap();
                assert_eq!(ta, tb, "{} differs", a.display());
            }
        }
        let t_csv = std::fs::read_to_string(&first.files[0]).unwrap();
        assert!(t_csv.starts_with("p3,p4,T,direction_a\n"));
        assert!(t_csv.ends_with('\n'));
        // With no horizontal tilt the x4 half-space never crosses along
        // the flow, so whole fibers are inside or outside: the export
        // spells the crossing as inf/-inf, not as a crash.
        let mut c2 = small("variant = halfspace\naxis = x4\na = 0");
        c2.grid = 3;
        c2.out = Some(dir.path().join("three"));
        let third = run_graph(&c2).unwrap();
        let t_csv = std::fs::read_to_string(&third.files[0]).unwrap();
        assert!(t_csv.contains(",inf,") || t_csv.contains(",-inf,"));
    }

    #[test]
    fn filiform_runner_reports_rank_and_rejects_small_steps() {
        let out = run_filiform(3, Some(vec![0.0, 1.0, 2.0]), None).unwrap();
        assert!(out.pass);
        assert!(out.lines.iter().any(|l| l.contains("rank: full")));

        let out = run_filiform(4, Some(vec![1.0, 1.0, 2.0, 3.0]), None).unwrap();
        assert!(out.lines.iter().any(|l| l.contains("rank: deficient")));

        assert!(run_filiform(1, None, None).is_err());
        assert!(run_filiform(3, Some(vec![0.0]), None).is_err());
    }

    #[test]
    fn demo_detects_the_configured_jump() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = small("variant = monotone_g\ng = -1:2, 0.5:2, 0.5:0, 1:0");
        c.grid = 64;
        c.out = Some(dir.path().to_path_buf());
        let out = run_demo(&c).unwrap();
        assert!(out.pass, "{:?}", out.lines);
        let text = std::fs::read_to_string(&out.files[0]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["report"]["declared_jumps_matched"], true);
        assert_eq!(v["tool_version"], TOOL_VERSION);
        let jumps = v["report"]["discontinuity"]["jumps"].as_array().unwrap();
        assert_eq!(jumps.len(), 1);
        assert!((jumps[0]["size"].as_f64().unwrap() - 2.0).abs() < 1e-3);
        assert!((jumps[0]["location"].as_f64().unwrap() - 0.5).abs() < 0.05);
    }

    #[test]
    fn envelope_embeds_version_seed_and_hash() {
        let map: BTreeMap<String, String> = parse_config_text("seed = 12").unwrap();
        let cfg = RunConfig::from_map(map).unwrap();
        let env = envelope(&cfg, 42_u32);
        let text = serde_json::to_string(&env).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["seed"], 12);
        assert_eq!(v["config_hash"], cfg.hash);
        assert_eq!(v["report"], 42);
    }
}
