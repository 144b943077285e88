//! Graph values along tilted vertical lines: closed form vs. bisection,
//! the two-scale Holder bound with its sharp constant, the cube-root
//! blow-up that kills Euclidean Lipschitz bounds, and a genuinely
//! discontinuous graph function from a stepped profile.

use engel::intrinsic::{
    cone_t_closed_form, demonstrate_discontinuity, holder_bound_check, holder_constant,
    intrinsic_t_auto, lipschitz_blowup_exponent, two_scale_profile, IntrinsicQuery,
};
use engel::point::Point;
use engel::pwl::PiecewiseLinear;
use engel::sampler::linspace;
use engel::sets::CalibratedSetSpec;

fn main() -> engel::Result<()> {
    // The model cone's crossing times have a closed form (the first
    // admissible root of a quartic); bisection through the membership
    // predicate reproduces it.
    println!("crossing times for the cone, direction a = 1:");
    for (p3, p4) in [(0.0, -1.0 / 24.0), (1.0, -1.0), (-0.5, 0.25), (0.3, 0.0)] {
        let closed = cone_t_closed_form(1.0, p3, p4)?;
        let query = IntrinsicQuery::new(
            CalibratedSetSpec::cone(),
            1.0,
            Point::new(0.0, 0.0, p3, p4),
        )?;
        let bis = intrinsic_t_auto(&query, 1e-10)?.to_f64();
        println!("  (p3, p4) = ({p3:6.3}, {p4:8.5})  closed {closed:.9}, bisected {bis:.9}");
    }

    // T is controlled by max(sqrt|p3|, cbrt|p4|); the sharp constant
    // K*(a) comes from a face scan of the unit box.
    println!("\ntwo-scale bound T <= K*(a) max(sqrt|p3|, cbrt|p4|):");
    for a in [0.5, 1.0, 2.0] {
        let k = holder_constant(a, 6)?;
        let grid = linspace(-1.0, 1.0, 60);
        let samples: Vec<(f64, f64)> = grid
            .iter()
            .flat_map(|&p3| grid.iter().map(move |&p4| (p3, p4)))
            .collect();
        let rep = holder_bound_check(a, k, &samples, 1e-10)?;
        println!(
            "  a = {a}: K* = {k:.6}, {} violations on a {}-point grid",
            rep.violations.len(),
            samples.len()
        );
    }
    println!(
        "  profile at (p3, p4) = (0.5, -0.125): {:.6}",
        two_scale_profile(0.5, -0.125)
    );

    // Over the axis p3 = 0 the crossing grows like |p4|^(1/3): the
    // fitted exponent says the graph is not Euclidean-Lipschitz.
    let p4s: Vec<f64> = (0..26)
        .map(|i| -10.0_f64.powf(-1.0 - 5.0 * i as f64 / 25.0))
        .collect();
    let fit = lipschitz_blowup_exponent(1.0, &p4s)?;
    println!(
        "\nblow-up fit: T ~ {:.4} |p4|^{:.4} (r^2 = {:.6})",
        fit.prefactor(),
        fit.slope,
        fit.r_squared
    );

    // A step in the profile is a step in the graph function: scanning
    // through the bisection pipeline recovers the jump.
    let g = PiecewiseLinear::new(vec![(-1.0, 1.5), (0.25, 1.5), (0.25, 0.0), (1.0, 0.0)])?;
    let rep = demonstrate_discontinuity(&g, (-1.0, 1.0), 96, 0.5)?;
    println!("\nstepped profile scan:");
    for j in &rep.jumps {
        println!(
            "  jump of {:.6} at p4 = {:.6} (declared: {:?})",
            j.size,
            j.location,
            rep.declared
                .iter()
                .map(|d| (d.x, d.left - d.right))
                .collect::<Vec<_>>()
        );
    }
    Ok(())
}
