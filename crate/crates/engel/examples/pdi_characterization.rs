//! The derivative inequality that characterizes calibrated graphs:
//! (d3 G)^2 + 2 d4 G <= 0, checked pointwise by finite differences and
//! in weak form against a family of polynomial bumps.

use engel::pdi::{
    check_jump_condition, pdi_distributional_spec, pdi_pointwise_spec, Bump, Region,
    TestFunctionFamily,
};
use engel::pwl::PiecewiseLinear;
use engel::sets::CalibratedSetSpec;

fn main() -> engel::Result<()> {
    let region = Region::new((-2.0, 2.0), (0.5, 4.0))?;

    // The model cone saturates the inequality: the residual is
    // identically zero, so the pointwise check sits at rounding level.
    let cone = CalibratedSetSpec::cone();
    let rep = pdi_pointwise_spec(&cone, &region, 50, 1e-3, 1e-6)?;
    println!("cone, pointwise:      {}", rep.summary_line());

    // Weak form: integrate against bumps instead of differentiating.
    let family = TestFunctionFamily::grid_in_region(&region, 3, 0.5, Bump::DEFAULT_DEGREE)?;
    let rep = pdi_distributional_spec(&cone, &family, 32, 1e-6)?;
    println!("cone, distributional: {}", rep.summary_line());

    // A profile family with slopes under the admissible threshold
    // passes with strict margin.
    let gentle = CalibratedSetSpec::fgk(
        PiecewiseLinear::new(vec![(-4.0, -0.8), (0.0, 0.0), (4.0, 0.8)])?,
        PiecewiseLinear::new(vec![(-4.0, 2.0), (4.0, -2.0)])?,
        2.0,
    )?;
    let rep = pdi_pointwise_spec(&gentle, &region, 50, 1e-3, 1e-6)?;
    println!("gentle family:        {}", rep.summary_line());

    // Doubling the slope tips the inequality: the report carries the
    // witnesses instead of raising an error.
    let steep = CalibratedSetSpec::fgk(
        PiecewiseLinear::new(vec![(-40.0, -40.0), (40.0, 40.0)])?,
        PiecewiseLinear::constant(0.0),
        2.0,
    )?;
    let rep = pdi_pointwise_spec(&steep, &region, 50, 1e-3, 1e-6)?;
    println!("steep family:         {}", rep.summary_line());
    if let Some(v) = rep.violations.first() {
        println!(
            "   first witness at (x3, x4) = ({}, {}): residual {:.3}",
            v.witness[0], v.witness[1], v.value
        );
    }

    // Jump structure: a declared step in the profile is admissible only
    // because its jump segment is parallel to the x4 axis.
    let stepped = CalibratedSetSpec::monotone_g(PiecewiseLinear::new(vec![
        (-2.0, 1.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (2.0, -1.0),
    ])?);
    let rep = check_jump_condition(&stepped.graph());
    println!("stepped profile:      {}", rep.summary_line());
    Ok(())
}
