//! Euclidean-side regularity: directions of guaranteed monotonicity,
//! the aperture of the admissible graphing cone, and extraction of the
//! boundary as an honest Lipschitz graph over a rotated hyperplane.

use engel::rectify::{
    cone_aperture_bound, euclidean_cone_slopes, extract_rotated_graph, group_cone_test,
    half_space_reduction_x1, GraphingDirection, MonotoneFrame,
};
use engel::monotone::boundary_grid;
use engel::sampler::linspace;
use engel::sets::CalibratedSetSpec;

fn main() -> engel::Result<()> {
    let spec = CalibratedSetSpec::cone();

    // Four independent Euclidean directions of one-sided monotonicity,
    // verified on boundary points by a margin test in the group.
    let frame = MonotoneFrame::default();
    println!("monotone frame determinant: {}", frame.det());
    let boundary = boundary_grid(
        &spec,
        &linspace(-1.5, 1.5, 6),
        &linspace(0.6, 3.0, 6),
        1e3,
        1e-10,
    );
    let rep = group_cone_test(&spec, &frame, &boundary, 25, 17, 0.01);
    println!("group cone test:            {}", rep.summary_line());

    // Positive combinations of slopes give a cone of directions along
    // which the boundary height can only climb at a bounded rate.
    let cone = euclidean_cone_slopes(&[(0.0, 1.0), (1.0, 1.0), (-1.0, 1.0), (1.0, 0.25)])?;
    println!("\nheight slopes by direction in the (x3, x4) plane:");
    for d in &cone.directions {
        println!(
            "  v = ({:7.4}, {:6.4})  slope {:.4}{}",
            d.v.0,
            d.v.1,
            d.constant,
            if d.capped { " (capped)" } else { "" }
        );
    }

    // Any direction strictly inside the cone serves as a graphing axis;
    // the aperture bound is the worst slope compatible with it.
    let w = GraphingDirection::default_direction();
    let aperture = cone_aperture_bound(&w, 800, 3);
    println!("\ndefault direction aperture bound: {aperture:.6}");

    // Extract the boundary as a height function over the hyperplane
    // orthogonal to w and measure its empirical Lipschitz constant.
    for n in [20, 40] {
        let g = extract_rotated_graph(&spec, &w, 1.0, n, 7, 1e3, 1e-10)?;
        println!(
            "  {n}^3 rays: empirical Lipschitz constant {:.6}, {} misses",
            g.lipschitz_hat, g.misses
        );
    }

    // Rejected directions come back with the reason.
    match GraphingDirection::new([0.0, 0.1, 1.0, 1.0]) {
        Err(e) => println!("\nrejected direction: {e}"),
        Ok(_) => unreachable!("direction lies outside the cone"),
    }

    // The symbolic half-space reduction: conjugating the horizontal
    // monotone direction sweeps out the commutator directions one by
    // one, so full-frame monotonicity forces a half-space.
    let reduction = half_space_reduction_x1();
    println!();
    for step in &reduction.steps {
        println!(
            "conjugate by {}: t-coefficient {:?}, gains invariant {}",
            step.conjugating, step.t_coefficient, step.new_invariant
        );
    }
    println!("invariants: {}", reduction.invariants.join(", "));
    println!("{}", reduction.conclusion);
    Ok(())
}
