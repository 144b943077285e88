//! Gauss–Legendre quadrature: nodes and weights by Newton iteration on the
//! Legendre recurrence, plus interval and tensor-product integrators.
//!
//! An n-point rule integrates polynomials of degree 2n−1 exactly, which is
//! why it is the workhorse for the bump-function integrals: the bumps are
//! polynomials of modest degree, so on a smooth piece the only error left
//! is the integrand's non-polynomial part.

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * cur - (kf - 1.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    // Standard identity for the derivative in terms of P_n and P_{n-1}.
    let dp = n as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, dp)
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1],
/// in ascending node order.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "quadrature order must be at least 1");
    if n == 1 {
        return vec![(0.0, 2.0)];
    }
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-style initial guess for the i-th root, then Newton.
        let mut x =
            (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (p, dp) = legendre_and_deriv(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
    }
    rule.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    rule
}

/// ∫_a^b f(x) dx by a single n-point Gauss–Legendre rule.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let rule = gauss_legendre(n);
    integrate_with_rule(f, a, b, &rule)
}

/// Same as [`integrate`] with a precomputed rule (callers integrating many
/// intervals should build the rule once).
pub fn integrate_with_rule(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rule: &[(f64, f64)],
) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for &(x, w) in rule {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// ∫∫ f over [a3,b3]×[a4,b4] by the tensor-product n×n rule.
pub fn integrate_2d(
    f: impl Fn(f64, f64) -> f64,
    x3_range: (f64, f64),
    x4_range: (f64, f64),
    n: usize,
) -> f64 {
    let rule = gauss_legendre(n);
    integrate_with_rule(
        |x4| integrate_with_rule(|x3| f(x3, x4), x3_range.0, x3_range.1, &rule),
        x4_range.0,
        x4_range.1,
        &rule,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn nodes_are_symmetric_and_weights_sum_to_two() {
        for n in [2, 5, 8, 16, 32] {
            let rule = gauss_legendre(n);
            let wsum: f64 = rule.iter().map(|&(_, w)| w).sum();
            assert_relative_eq!(wsum, 2.0, epsilon = 1e-13);
            for i in 0..n {
                assert_relative_eq!(rule[i].0, -rule[n - 1 - i].0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn two_point_rule_is_exact_on_cubics() {
        // Against the antiderivative oracle x^4/4.
        let val = integrate(|x| x * x * x, 0.0, 1.0, 2);
        assert_relative_eq!(val, 0.25, epsilon = 1e-14);
    }

    #[test]
    fn exact_through_degree_2n_minus_1() {
        for n in [3usize, 6, 10] {
            for d in 0..(2 * n) {
                let val = integrate(|x| x.powi(d as i32), 0.0, 1.0, n);
                let exact = 1.0 / (d as f64 + 1.0);
                assert_relative_eq!(val, exact, epsilon = 1e-12, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn matches_closed_form_for_exponential() {
        let val = integrate(f64::exp, -1.0, 2.0, 32);
        let exact = f64::exp(2.0) - f64::exp(-1.0);
        assert_relative_eq!(val, exact, epsilon = 1e-12);
    }

    #[test]
    fn tensor_rule_matches_separable_product() {
        let val = integrate_2d(|x, y| x * x * (1.0 + y), (0.0, 1.0), (-1.0, 1.0), 8);
        // ∫x² over [0,1] = 1/3; ∫(1+y) over [−1,1] = 2.
        assert_relative_eq!(val, 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn known_five_point_node() {
        // Largest node of the 5-point rule: sqrt(5 + 2 sqrt(10/7)) / 3.
        let rule = gauss_legendre(5);
        let expected = (5.0 + 2.0 * (10.0_f64 / 7.0).sqrt()).sqrt() / 3.0;
        assert_relative_eq!(rule[4].0, expected, epsilon = 1e-14);
    }
}
