//! Tour of the group layer: multiplication, inverses, closed-form flows
//! against a numerical integrator, and the adjoint action.

use engel::algebra::{adjoint_exp, bracket, TangentVector};
use engel::point::{exp_point, flow, inverse, multiply, rk4_flow, Point};

fn main() {
    let p = Point::new(0.5, -1.0, 2.0, 0.25);
    let q = Point::new(-0.75, 0.5, 1.0, -1.5);

    println!("p            = {:?}", p.as_array());
    println!("q            = {:?}", q.as_array());
    println!("p * q        = {:?}", multiply(p, q).as_array());
    println!("q * p        = {:?}", multiply(q, p).as_array());
    println!("p * p^-1     = {:?}", multiply(p, inverse(p)).as_array());

    // The closed-form flow is a cubic polynomial in t; an off-the-shelf
    // fourth-order integrator lands on the same points.
    let v = TangentVector::new(1.0, 0.5, -0.25, 2.0);
    let t = 1.75;
    let closed = flow(p, v, t);
    let numeric = rk4_flow(p, v, t, 400);
    println!("\nflow(p, v, {t})   = {:?}", closed.as_array());
    println!("integrator        = {:?}", numeric.as_array());
    println!("difference        = {:.3e}", closed.max_diff(numeric));

    // Flowing along X2 has a formula worth knowing: only x2, x3, x4
    // move, and they move linearly in t (x4 with the factor x1^2/2).
    let vertical = flow(p, TangentVector::X2, 2.0);
    println!("\nflow(p, X2, 2)    = {:?}", vertical.as_array());

    // Flowing for time 1 from the identity is the group exponential.
    println!("exp(v)            = {:?}", exp_point(v).as_array());

    // The adjoint action of exp(s X1) tilts X2 into the higher layers:
    // Ad(exp(s X1)) X2 = X2 + s X3 + s^2/2 X4.
    for s in [0.5, 1.0, 2.0] {
        let ad = adjoint_exp(TangentVector::X1.scale(s), TangentVector::X2);
        println!("Ad(exp({s} X1)) X2 = {:?}", ad.as_array());
    }

    // The bracket table in action: [X1, X2] = X3, [X1, X3] = X4, and
    // everything three levels deep vanishes.
    let x3 = bracket(TangentVector::X1, TangentVector::X2);
    let x4 = bracket(TangentVector::X1, x3);
    let zero = bracket(TangentVector::X1, x4);
    println!("\n[X1, X2]          = {:?}", x3.as_array());
    println!("[X1, [X1, X2]]    = {:?}", x4.as_array());
    println!("[X1, [X1, [X1, X2]]] = {:?}", zero.as_array());
}
