//! Builds the standard families of calibrated sets and runs the full
//! validator battery against each: vertical-flow monotonicity (plus
//! conjugated directions), the partial-Lipschitz bound, level-set
//! structure, and cone inclusion at boundary points.

use engel::monotone::{
    check_monotone_direction, check_x2_monotone, conjugated_x2, level_set_check,
    partial_lipschitz_check,
};
use engel::pwl::PiecewiseLinear;
use engel::sampler::SampleSpace;
use engel::sets::{CalibratedSetSpec, HalfSpaceAxis};

fn main() -> engel::Result<()> {
    let specs = vec![
        CalibratedSetSpec::half_space(HalfSpaceAxis::X2, 0.0)?,
        CalibratedSetSpec::half_space(HalfSpaceAxis::X4, 1.0)?,
        CalibratedSetSpec::monotone_g(PiecewiseLinear::new(vec![(-2.0, 1.0), (2.0, -1.0)])?),
        CalibratedSetSpec::fgk(
            PiecewiseLinear::new(vec![(-4.0, -1.0), (0.0, 0.0), (4.0, 1.0)])?,
            PiecewiseLinear::new(vec![(-4.0, 2.0), (4.0, -2.0)])?,
            2.0,
        )?,
        CalibratedSetSpec::cone(),
    ];

    let space = SampleSpace {
        seed: 42,
        count: 5_000,
        ..SampleSpace::default()
    };

    for spec in &specs {
        println!("== {}", spec.describe());
        let checks = [
            check_x2_monotone(spec, &space),
            check_monotone_direction(spec, conjugated_x2(0.5), &space),
            check_monotone_direction(spec, conjugated_x2(-1.0), &space),
            partial_lipschitz_check(spec, &space),
            level_set_check(spec, &space),
        ];
        for rep in &checks {
            println!("   {}", rep.summary_line());
        }
        println!();
    }

    // Validation is falsification-driven: an increasing profile is
    // accepted as input and duly reported as a violation.
    let bad = CalibratedSetSpec::monotone_g(PiecewiseLinear::new(vec![
        (-2.0, -1.0),
        (2.0, 1.0),
    ])?);
    let rep = check_x2_monotone(&bad, &space);
    println!("== {}", bad.describe());
    println!("   {}", rep.summary_line());
    if let Some(v) = rep.violations.first() {
        println!("   first witness: {:?} ({})", v.witness, v.note);
    }
    Ok(())
}
