//! Filiform Lie algebras of the first kind of arbitrary step: sparse
//! structure constants, the adjoint expansion of the second horizontal
//! generator, the Vandermonde basis built from it, and the symbolic
//! half-space reduction for the other horizontal normal.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::Serialize;

use crate::rectify::{ReductionStep, SymbolicReport};
use crate::Error;

/// Step-`s` filiform Lie algebra of the first kind: basis `X0..Xs` with
/// the chain brackets `[X0, X_{j-1}] = X_j` for `j = 2..s` and all other
/// basis brackets zero. Vectors are coefficient slices of length `s + 1`
/// indexed by the basis subscript.
#[derive(Clone, Debug)]
pub struct FiliformAlgebra {
    step: usize,
    /// `(i, j) -> (k, sign)` meaning `[X_i, X_j] = sign * X_k`, stored for
    /// `i < j` only; the table is O(s) sparse.
    table: BTreeMap<(usize, usize), (usize, i64)>,
}

impl FiliformAlgebra {
    /// Builds the algebra. `step >= 1`; `step = 1` is the abelian plane
    /// (empty bracket table).
    pub fn new(step: usize) -> Result<Self, Error> {
        if step == 0 {
            return Err(Error::InvalidParameter(
                "filiform step must be at least 1".to_string(),
            ));
        }
        let mut table = BTreeMap::new();
        for j in 2..=step {
            table.insert((0, j - 1), (j, 1));
        }
        Ok(FiliformAlgebra { step, table })
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// Number of basis vectors, `s + 1`.
    pub fn dim(&self) -> usize {
        self.step + 1
    }

    pub fn basis_label(&self, k: usize) -> String {
        format!("X{k}")
    }

    pub fn structure_constants(&self) -> &BTreeMap<(usize, usize), (usize, i64)> {
        &self.table
    }

    /// One-hot coefficient vector for basis element `X_k`.
    pub fn basis_vector(&self, k: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        v[k] = 1.0;
        v
    }

    /// `[v, w]` from the sparse table by bilinearity.
    pub fn bracket(&self, v: &[f64], w: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (&(i, j), &(k, sign)) in &self.table {
            out[k] += sign as f64 * (v[i] * w[j] - v[j] * w[i]);
        }
        out
    }

    /// `[v, w]` in exact rational arithmetic.
    pub fn bracket_exact(&self, v: &[BigRational], w: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.dim()];
        for (&(i, j), &(k, sign)) in &self.table {
            let term = &v[i] * &w[j] - &v[j] * &w[i];
            out[k] += BigRational::from(BigInt::from(sign)) * term;
        }
        out
    }

    /// `Ad_{exp(t X0)} X1` by the truncated exponential series of
    /// `ad(t X0)`: the sum of `ad(t X0)^k X1 / k!`, which terminates
    /// because each bracket climbs one layer. The coefficients come out
    /// as `t^k / k!` on `X_{k+1}`.
    pub fn adjoint(&self, t: f64) -> Vec<f64> {
        let x0: Vec<f64> = self.basis_vector(0).iter().map(|&c| c * t).collect();
        let mut term = self.basis_vector(1);
        let mut sum = term.clone();
        let mut k = 1.0;
        loop {
            term = self.bracket(&x0, &term);
            for c in &mut term {
                *c /= k;
            }
            if term.iter().all(|&c| c == 0.0) {
                break;
            }
            for (s, c) in sum.iter_mut().zip(term.iter()) {
                *s += c;
            }
            k += 1.0;
        }
        sum
    }

    /// `Ad_{exp(t X0)} X1` in exact rational arithmetic.
    pub fn adjoint_exact(&self, t: &BigRational) -> Vec<BigRational> {
        let mut x0 = vec![BigRational::zero(); self.dim()];
        x0[0] = t.clone();
        let mut term = vec![BigRational::zero(); self.dim()];
        term[1] = BigRational::one();
        let mut sum = term.clone();
        let mut k = BigInt::one();
        loop {
            term = self.bracket_exact(&x0, &term);
            let kq = BigRational::from(k.clone());
            for c in &mut term {
                *c /= &kq;
            }
            if term.iter().all(|c| c.is_zero()) {
                break;
            }
            for (s, c) in sum.iter_mut().zip(term.iter()) {
                *s += c;
            }
            k += 1;
        }
        sum
    }

    /// Coefficient polynomial of `t -> Ad_{exp(t X_c)} X_target`: entry
    /// `k` of the result is the vector multiplying `t^k`. Derived from
    /// the bracket table, not hardcoded.
    pub fn adjoint_series(&self, conjugator: usize, target: usize) -> Vec<Vec<f64>> {
        let c = self.basis_vector(conjugator);
        let mut term = self.basis_vector(target);
        let mut coeffs = vec![term.clone()];
        let mut k = 1.0;
        loop {
            term = self.bracket(&c, &term);
            for x in &mut term {
                *x /= k;
            }
            if term.iter().all(|&x| x == 0.0) {
                break;
            }
            coeffs.push(term.clone());
            k += 1.0;
        }
        coeffs
    }
}

/// Result of assembling the monotone directions `Y_j = Ad_{exp(t_j X0)} X1`
/// into a basis of the span of `X1..Xs`.
#[derive(Clone, Debug, Serialize)]
pub struct BasisReport {
    pub step: usize,
    pub ts: Vec<f64>,
    /// Determinant of the `s x s` coefficient matrix of the `Y_j` over
    /// `X1..Xs`.
    pub determinant: f64,
    /// `prod_{i<j} (t_j - t_i)`.
    pub scaled_vandermonde: f64,
    /// `prod_{k=0}^{s-1} 1/k!` — the row scalings relating the raw
    /// coefficient matrix to the classical Vandermonde matrix.
    pub factorial_scaling: f64,
    /// `factorial_scaling * scaled_vandermonde`; equals the determinant.
    pub product_formula: f64,
    pub full_rank: bool,
    /// Whether the determinant and rank came from exact rational
    /// arithmetic (small steps) rather than floating LU.
    pub exact: bool,
}

/// Exact determinant by fraction-free-enough Gaussian elimination over
/// the rationals (fine at these sizes).
fn det_exact(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(pr) = pivot else {
            return BigRational::zero();
        };
        if pr != col {
            m.swap(pr, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Builds `Y_j = Ad_{exp(t_j X0)} X1` for each supplied parameter and
/// reports whether they span `X1..Xs`: the coefficient matrix is the
/// Vandermonde matrix in the `t_j` with row `k` scaled by `1/k!`, so its
/// determinant is `(prod 1/k!) * prod_{i<j}(t_j - t_i)` and full rank is
/// equivalent to the parameters being pairwise distinct.
pub fn vandermonde_basis(algebra: &FiliformAlgebra, ts: &[f64]) -> Result<BasisReport, Error> {
    let s = algebra.step();
    if ts.len() != s {
        return Err(Error::InvalidParameter(format!(
            "need exactly {} parameters for step {}, got {}",
            s,
            s,
            ts.len()
        )));
    }
    if ts.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParameter(
            "basis parameters must be finite".to_string(),
        ));
    }

    let mut scaled_vandermonde = 1.0;
    for j in 1..s {
        for i in 0..j {
            scaled_vandermonde *= ts[j] - ts[i];
        }
    }
    let mut factorial_scaling = 1.0;
    let mut fact = 1.0;
    for k in 1..s {
        fact *= k as f64;
        factorial_scaling /= fact;
    }

    let (determinant, full_rank, exact) = if s <= 12 {
        let rows: Vec<Vec<BigRational>> = ts
            .iter()
            .map(|&t| {
                let tq = BigRational::from_float(t).expect("finite checked above");
                let y = algebra.adjoint_exact(&tq);
                y[1..].to_vec()
            })
            .collect();
        let d = det_exact(rows);
        (d.to_f64().unwrap_or(f64::NAN), !d.is_zero(), true)
    } else {
        // Beyond the exact range, elimination on the raw coefficient
        // matrix is numerically meaningless (the matrix is so
        // ill-conditioned that even a determinant of exactly 1 drowns in
        // roundoff), so evaluate the determinant through its factored
        // closed form: products of differences are computed stably, and
        // the product is zero exactly when two parameters coincide.
        (
            factorial_scaling * scaled_vandermonde,
            scaled_vandermonde != 0.0,
            false,
        )
    };

    Ok(BasisReport {
        step: s,
        ts: ts.to_vec(),
        determinant,
        scaled_vandermonde,
        factorial_scaling,
        product_formula: factorial_scaling * scaled_vandermonde,
        full_rank,
        exact,
    })
}

/// Symbolic half-space reduction for the horizontal normal `X0`: the set
/// is invariant under `X1`, and conjugating the monotone direction `X0`
/// by `exp(t X_j)` gives `X0 - t X_{j+1}` exactly (the quadratic term of
/// the adjoint series vanishes), so letting `t` grow in both signs makes
/// `X_{j+1}` a new invariant direction. Iterating from `j = 1` derives
/// the invariants `X2..Xs` in order, which pins the set as a half-space.
pub fn half_space_reduction_filiform(algebra: &FiliformAlgebra) -> SymbolicReport {
    let s = algebra.step();
    let mut steps = Vec::new();
    let mut invariants = Vec::new();
    for j in 1..s {
        let series = algebra.adjoint_series(j, 0);
        let lin = series
            .get(1)
            .cloned()
            .unwrap_or_else(|| vec![0.0; algebra.dim()]);
        let quad = series
            .get(2)
            .cloned()
            .unwrap_or_else(|| vec![0.0; algebra.dim()]);
        debug_assert!(quad.iter().all(|&c| c == 0.0));
        let gained = algebra.basis_label(j + 1);
        steps.push(ReductionStep {
            conjugating: format!("exp(t {})", algebra.basis_label(j)),
            t_coefficient: lin,
            t2_coefficient: quad,
            new_invariant: gained.clone(),
        });
        invariants.push(gained);
    }
    SymbolicReport {
        steps,
        invariants,
        conclusion: format!(
            "invariant under X2..X{s} and monotone along X0: the set is a half-space"
        ),
    }
}
