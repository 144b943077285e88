//! The Engel Lie algebra: tangent vectors, brackets, adjoints, and the
//! bracket-preserving endomorphisms that normalize a horizontal normal.
//!
//! Basis convention: `X1, X2` span the horizontal layer, `X3 = [X1, X2]`
//! spans the second layer, `X4 = [X1, X3]` the third. All other basis
//! brackets vanish. The algebra is nilpotent of step 3, so adjoint series
//! terminate after the second-order term.

use serde::Serialize;

/// Coefficients of a tangent vector over the basis `X1..X4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TangentVector {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl TangentVector {
    pub const fn new(c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        TangentVector { c1, c2, c3, c4 }
    }

    pub const ZERO: TangentVector = TangentVector::new(0.0, 0.0, 0.0, 0.0);
    pub const X1: TangentVector = TangentVector::new(1.0, 0.0, 0.0, 0.0);
    pub const X2: TangentVector = TangentVector::new(0.0, 1.0, 0.0, 0.0);
    pub const X3: TangentVector = TangentVector::new(0.0, 0.0, 1.0, 0.0);
    pub const X4: TangentVector = TangentVector::new(0.0, 0.0, 0.0, 1.0);

    pub fn scale(self, s: f64) -> TangentVector {
        TangentVector::new(s * self.c1, s * self.c2, s * self.c3, s * self.c4)
    }

    pub fn add(self, o: TangentVector) -> TangentVector {
        TangentVector::new(
            self.c1 + o.c1,
            self.c2 + o.c2,
            self.c3 + o.c3,
            self.c4 + o.c4,
        )
    }

    pub fn as_array(self) -> [f64; 4] {
        [self.c1, self.c2, self.c3, self.c4]
    }

    /// Max-norm distance to another vector.
    pub fn max_diff(self, o: TangentVector) -> f64 {
        let a = self.as_array();
        let b = o.as_array();
        (0..4).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
    }
}

/// Lie bracket. Bilinear extension of `[X1, X2] = X3`, `[X1, X3] = X4`,
/// all other basis brackets zero:
/// `[v, w] = (v1 w2 - v2 w1) X3 + (v1 w3 - v3 w1) X4`.
pub fn bracket(v: TangentVector, w: TangentVector) -> TangentVector {
    TangentVector::new(
        0.0,
        0.0,
        v.c1 * w.c2 - v.c2 * w.c1,
        v.c1 * w.c3 - v.c3 * w.c1,
    )
}

/// Adjoint action of the group element `exp(v)` on `w`. Nilpotency of step
/// 3 truncates the series exactly:
/// `Ad_{exp(v)} w = w + [v, w] + [v, [v, w]] / 2`.
pub fn adjoint_exp(v: TangentVector, w: TangentVector) -> TangentVector {
    let first = bracket(v, w);
    let second = bracket(v, first);
    w.add(first).add(second.scale(0.5))
}

/// A linear change of basis on the algebra together with its inverse,
/// stored as coefficient matrices acting on `(c1, c2, c3, c4)` columns.
#[derive(Clone, Copy, Debug)]
pub struct BasisChange {
    pub forward: [[f64; 4]; 4],
    pub inverse: [[f64; 4]; 4],
}

impl BasisChange {
    pub const IDENTITY: BasisChange = BasisChange {
        forward: ID4,
        inverse: ID4,
    };

    pub fn apply(&self, v: TangentVector) -> TangentVector {
        apply4(&self.forward, v)
    }

    pub fn apply_inverse(&self, v: TangentVector) -> TangentVector {
        apply4(&self.inverse, v)
    }
}

const ID4: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

fn apply4(m: &[[f64; 4]; 4], v: TangentVector) -> TangentVector {
    let x = v.as_array();
    let mut y = [0.0; 4];
    for (i, row) in m.iter().enumerate() {
        y[i] = row[0] * x[0] + row[1] * x[1] + row[2] * x[2] + row[3] * x[3];
    }
    TangentVector::new(y[0], y[1], y[2], y[3])
}

/// The bracket-preserving endomorphism that maps a horizontal normal
/// `alpha X1 + beta X2` to `X1` scale-normalized form. It acts by
/// `X1 -> alpha X1 + beta X2`, `X2 -> X2`, `X3 -> alpha X3`,
/// `X4 -> alpha^2 X4`, and is invertible exactly when `alpha != 0`.
/// For `alpha == 0` the identity is returned (a vanishing first component
/// means no normalization is possible or needed).
///
/// Bracket preservation is what makes this usable for transporting
/// monotonicity statements: `psi [v, w] = [psi v, psi w]` for all `v, w`.
pub fn normalize_normal(alpha: f64, beta: f64) -> BasisChange {
    if alpha == 0.0 {
        return BasisChange::IDENTITY;
    }
    // Columns are the images of X1..X4.
    let forward = [
        [alpha, 0.0, 0.0, 0.0],
        [beta, 1.0, 0.0, 0.0],
        [0.0, 0.0, alpha, 0.0],
        [0.0, 0.0, 0.0, alpha * alpha],
    ];
    // Analytic inverse: X1 -> (X1 - beta X2)/alpha, X2 -> X2,
    // X3 -> X3/alpha, X4 -> X4/alpha^2.
    let inverse = [
        [1.0 / alpha, 0.0, 0.0, 0.0],
        [-beta / alpha, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0 / alpha, 0.0],
        [0.0, 0.0, 0.0, 1.0 / (alpha * alpha)],
    ];
    BasisChange { forward, inverse }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: TangentVector, b: TangentVector, tol: f64) {
        assert!(a.max_diff(b) <= tol, "{a:?} != {b:?}");
    }

    #[test]
    fn basis_brackets() {
        assert_eq!(bracket(TangentVector::X1, TangentVector::X2), TangentVector::X3);
        assert_eq!(bracket(TangentVector::X1, TangentVector::X3), TangentVector::X4);
        assert_eq!(bracket(TangentVector::X2, TangentVector::X3), TangentVector::ZERO);
        assert_eq!(bracket(TangentVector::X2, TangentVector::X4), TangentVector::ZERO);
        assert_eq!(bracket(TangentVector::X3, TangentVector::X4), TangentVector::ZERO);
        assert_eq!(bracket(TangentVector::X1, TangentVector::X4), TangentVector::ZERO);
    }

    #[test]
    fn bracket_is_antisymmetric_and_bilinear() {
        let v = TangentVector::new(1.0, -2.0, 0.5, 3.0);
        let w = TangentVector::new(-0.25, 1.5, 2.0, -1.0);
        let vw = bracket(v, w);
        let wv = bracket(w, v);
        assert_close(vw, wv.scale(-1.0), 0.0);
        // bilinearity in the first slot
        let u = TangentVector::new(0.75, 0.25, -1.0, 2.0);
        let lhs = bracket(v.scale(2.0).add(u), w);
        let rhs = bracket(v, w).scale(2.0).add(bracket(u, w));
        assert_close(lhs, rhs, 1e-15);
    }

    #[test]
    fn jacobi_identity_on_a_spot_check() {
        let v = TangentVector::new(1.0, 2.0, 3.0, 4.0);
        let w = TangentVector::new(-1.0, 0.5, 2.0, 0.0);
        let z = TangentVector::new(0.25, -0.75, 1.0, -2.0);
        let total = bracket(bracket(v, w), z)
            .add(bracket(bracket(w, z), v))
            .add(bracket(bracket(z, v), w));
        assert_close(total, TangentVector::ZERO, 1e-14);
    }

    #[test]
    fn adjoint_of_x2_flow_tilts_x1_into_x3() {
        // Ad_{exp(t X2)} X1 = X1 - t X3
        let t = 0.8;
        let got = adjoint_exp(TangentVector::X2.scale(t), TangentVector::X1);
        assert_close(got, TangentVector::new(1.0, 0.0, -t, 0.0), 0.0);
    }

    #[test]
    fn adjoint_of_x3_flow_tilts_x1_into_x4() {
        // Ad_{exp(t X3)} X1 = X1 - t X4
        let t = -1.3;
        let got = adjoint_exp(TangentVector::X3.scale(t), TangentVector::X1);
        assert_close(got, TangentVector::new(1.0, 0.0, 0.0, -t), 0.0);
    }

    #[test]
    fn adjoint_of_x1_flow_produces_the_monotone_family() {
        // Ad_{exp(t X1)} X2 = X2 + t X3 + (t^2/2) X4
        let t = 2.0;
        let got = adjoint_exp(TangentVector::X1.scale(t), TangentVector::X2);
        assert_close(got, TangentVector::new(0.0, 1.0, 2.0, 2.0), 0.0);
    }

    #[test]
    fn adjoint_of_central_direction_is_identity() {
        let w = TangentVector::new(0.3, -0.4, 5.0, 1.0);
        let got = adjoint_exp(TangentVector::X4.scale(7.0), w);
        assert_close(got, w, 0.0);
    }

    #[test]
    fn normalize_normal_maps_basis_as_documented() {
        let (alpha, beta) = (2.0, -3.0);
        let psi = normalize_normal(alpha, beta);
        assert_close(
            psi.apply(TangentVector::X1),
            TangentVector::new(alpha, beta, 0.0, 0.0),
            0.0,
        );
        assert_close(psi.apply(TangentVector::X2), TangentVector::X2, 0.0);
        assert_close(psi.apply(TangentVector::X3), TangentVector::X3.scale(alpha), 0.0);
        assert_close(
            psi.apply(TangentVector::X4),
            TangentVector::X4.scale(alpha * alpha),
            0.0,
        );
    }

    #[test]
    fn normalize_normal_preserves_brackets() {
        let psi = normalize_normal(1.7, 0.9);
        let v = TangentVector::new(0.5, -1.0, 2.0, 0.25);
        let w = TangentVector::new(-2.0, 0.75, 1.0, 3.0);
        let lhs = psi.apply(bracket(v, w));
        let rhs = bracket(psi.apply(v), psi.apply(w));
        assert!(lhs.max_diff(rhs) <= 1e-13);
    }

    #[test]
    fn normalize_normal_inverse_round_trips_against_numeric_inversion() {
        // Independent oracle: invert the forward matrix by Gauss-Jordan and
        // compare with the analytic inverse on all basis vectors.
        let (alpha, beta) = (-1.25, 2.5);
        let psi = normalize_normal(alpha, beta);

        let mut aug = [[0.0f64; 8]; 4];
        for i in 0..4 {
            for j in 0..4 {
                aug[i][j] = psi.forward[i][j];
            }
            aug[i][4 + i] = 1.0;
        }
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&a, &b| aug[a][col].abs().partial_cmp(&aug[b][col].abs()).unwrap())
                .unwrap();
            aug.swap(col, pivot);
            let p = aug[col][col];
            assert!(p.abs() > 1e-14);
            for j in 0..8 {
                aug[col][j] /= p;
            }
            for row in 0..4 {
                if row != col {
                    let f = aug[row][col];
                    for j in 0..8 {
                        aug[row][j] -= f * aug[col][j];
                    }
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                assert!(
                    (aug[i][4 + j] - psi.inverse[i][j]).abs() <= 1e-12,
                    "inverse mismatch at ({i}, {j})"
                );
            }
        }

        // Composition is the identity on a generic vector.
        let v = TangentVector::new(3.0, -1.5, 0.5, 2.0);
        assert!(psi.apply_inverse(psi.apply(v)).max_diff(v) <= 1e-12);
        assert!(psi.apply(psi.apply_inverse(v)).max_diff(v) <= 1e-12);
    }

    #[test]
    fn normalize_normal_degenerate_alpha_is_identity() {
        let psi = normalize_normal(0.0, 5.0);
        let v = TangentVector::new(1.0, 2.0, 3.0, 4.0);
        assert_close(psi.apply(v), v, 0.0);
        assert_close(psi.apply_inverse(v), v, 0.0);
    }
}
