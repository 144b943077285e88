//! Real roots of low-degree polynomials via companion-matrix eigenvalues.
//!
//! The intrinsic-graph formulas reduce to "largest real root of a quartic
//! that may degenerate" (double roots, vanishing leading coefficient when a
//! parameter hits zero). Eigenvalues of the companion matrix are robust in
//! exactly those cases, and a few Newton steps restore full precision.

use nalgebra::DMatrix;

/// Evaluate the polynomial `c[0] + c[1] x + … + c[n] x^n` and its
/// derivative at `x` (Horner).
fn eval_poly(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// All real roots of `c[0] + c[1] x + … + c[n] x^n`, ascending, with
/// multiplicities collapsed to a single entry. Near-real eigenvalues are
/// accepted when their imaginary part is small relative to their modulus,
/// then polished by Newton iteration on the exact coefficients.
///
/// A double real root perturbs into a conjugate pair with imaginary part
/// on the order of sqrt(machine epsilon), so the acceptance band is wide
/// (1e−6 relative). The flip side: a genuinely complex pair that close to
/// the real axis is also reported; callers that must distinguish the two
/// should check the polynomial's sign structure around the returned root.
///
/// The zero polynomial and constants have no roots by convention.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    // Strip negligible leading coefficients so a degenerate quartic is
    // solved as the cubic/quadratic it actually is.
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].abs() <= 1e-14 * scale {
        deg -= 1;
    }
    let c = &coeffs[..=deg];

    let mut roots = match deg {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        2 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = b * b - 4.0 * a * cc;
            if disc < 0.0 {
                Vec::new()
            } else {
                // Numerically stable form: avoid cancellation in b ± sqrt.
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                let mut r = if q == 0.0 {
                    vec![0.0, 0.0]
                } else {
                    vec![q / a, cc / q]
                };
                r.sort_by(|x, y| x.partial_cmp(y).unwrap());
                r
            }
        }
        _ => companion_real_roots(c),
    };

    // Newton polish on the original coefficients.
    for r in roots.iter_mut() {
        for _ in 0..8 {
            let (p, dp) = eval_poly(c, *r);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            *r -= step;
            if step.abs() <= 1e-15 * (1.0 + r.abs()) {
                break;
            }
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // Collapse clusters left behind by multiple roots.
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs())));
    roots
}

fn companion_real_roots(c: &[f64]) -> Vec<f64> {
    let deg = c.len() - 1;
    let lead = c[deg];
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lead;
    }
    let eigen = m.complex_eigenvalues();
    let mut out = Vec::new();
    for ev in eigen.iter() {
        if ev.im.abs() <= 1e-6 * (1.0 + ev.re.abs()) {
            out.push(ev.re);
        }
    }
    out
}

/// Largest real root, if any.
pub fn largest_real_root(coeffs: &[f64]) -> Option<f64> {
    real_roots(coeffs).last().copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn assert_roots(coeffs: &[f64], expected: &[f64]) {
        let got = real_roots(coeffs);
        assert_eq!(
            got.len(),
            expected.len(),
            "root count for {coeffs:?}: got {got:?}, expected {expected:?}"
        );
        for (g, e) in got.iter().zip(expected) {
            assert_relative_eq!(g, e, epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn factored_quartic_recovers_all_roots() {
        // (x−1)(x+2)(x−3)(x+4) = x⁴ + 2x³ − 13x² − 14x + 24
        assert_roots(&[24.0, -14.0, -13.0, 2.0, 1.0], &[-4.0, -2.0, 1.0, 3.0]);
    }

    #[test]
    fn double_root_is_found_once() {
        // (x−2)²(x²+1): only real root 2, twice.
        // x⁴ − 4x³ + 5x² − 4x + 4
        assert_roots(&[4.0, -4.0, 5.0, -4.0, 1.0], &[2.0]);
    }

    #[test]
    fn no_real_roots() {
        // (x²+1)(x²+4)
        assert_roots(&[4.0, 0.0, 5.0, 0.0, 1.0], &[]);
    }

    #[test]
    fn degenerate_leading_coefficient_falls_back_to_cubic() {
        // 0·x⁴ + x³ − x = x(x−1)(x+1)
        assert_roots(&[0.0, -1.0, 0.0, 1.0, 0.0], &[-1.0, 0.0, 1.0]);
    }

    #[test]
    fn quadratic_cancellation_is_stable() {
        // x² − 1e8 x + 1: roots ≈ 1e8 and 1e−8; naive formula loses the
        // small one entirely.
        let roots = real_roots(&[1.0, -1e8, 1.0]);
        assert_eq!(roots.len(), 2);
        assert_relative_eq!(roots[0], 1e-8, max_relative = 1e-9);
        assert_relative_eq!(roots[1], 1e8, max_relative = 1e-12);
    }

    #[test]
    fn linear_and_constant_edge_cases() {
        assert_roots(&[3.0, -1.5], &[2.0]);
        assert_roots(&[5.0], &[]);
        assert!(real_roots(&[0.0, 0.0]).is_empty());
    }

    #[test]
    fn largest_real_root_picks_max() {
        assert_eq!(largest_real_root(&[0.0, -1.0, 0.0, 1.0, 0.0]), Some(1.0));
        assert_eq!(largest_real_root(&[4.0, 0.0, 5.0, 0.0, 1.0]), None);
    }
}
