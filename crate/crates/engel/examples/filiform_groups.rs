//! The same half-space machinery in every filiform algebra of the first
//! kind: adjoint orbits of the second generator, shifted bases whose
//! change-of-basis matrix is a row-scaled Vandermonde matrix, and the
//! step-by-step conjugation argument.

use engel::filiform::{half_space_reduction_filiform, vandermonde_basis, FiliformAlgebra};

fn main() -> engel::Result<()> {
    // Conjugating X1 by exp(t X0) spreads it across the layers with
    // coefficients t^k / k!.
    let algebra = FiliformAlgebra::new(5)?;
    println!("step 5 adjoint orbit of X1:");
    for t in [0.5, 1.0, 2.0] {
        let row = algebra.adjoint(t);
        let terms: Vec<String> = row
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(k, &c)| format!("{c} X{k}"))
            .collect();
        println!("  Ad(exp({t} X0)) X1 = {}", terms.join(" + "));
    }

    // Distinct shifts t_1 < ... < t_s give a basis of the complement of
    // X0: the determinant is a product of factorials times the
    // Vandermonde product, and consecutive integers make it exactly 1.
    println!("\nshifted bases, consecutive integer parameters:");
    for s in 2..=8 {
        let algebra = FiliformAlgebra::new(s)?;
        let ts: Vec<f64> = (0..s).map(|k| k as f64).collect();
        let basis = vandermonde_basis(&algebra, &ts)?;
        println!(
            "  s = {s}: determinant {} (factorial scaling {:.3e} x Vandermonde {:.3e}), rank {}",
            basis.determinant,
            basis.factorial_scaling,
            basis.scaled_vandermonde,
            if basis.full_rank { "full" } else { "deficient" }
        );
    }

    // Repeating a shift collapses two rows.
    let algebra = FiliformAlgebra::new(4)?;
    let degenerate = vandermonde_basis(&algebra, &[0.0, 1.0, 1.0, 3.0])?;
    println!(
        "\nrepeated shift t = 1: determinant {}, rank {}",
        degenerate.determinant,
        if degenerate.full_rank { "full" } else { "deficient" }
    );

    // The half-space argument, one conjugation per layer.
    let reduction = half_space_reduction_filiform(&algebra);
    println!("\nstep 4 half-space reduction:");
    for step in &reduction.steps {
        println!(
            "  conjugate by {}: t-coefficient {:?}, gains invariant {}",
            step.conjugating, step.t_coefficient, step.new_invariant
        );
    }
    println!("  invariants: {}", reduction.invariants.join(", "));
    println!("  {}", reduction.conclusion);
    Ok(())
}
