//! Zassenhaus product corrections.
//!
//! The splitting defect of the Lie-Trotter product admits the expansion
//!
//! ```text
//! exp(t(A+B)) = exp(tA) exp(tB) exp(C2 t^2) exp(C3 t^3) exp(C4 t^4) ...
//! ```
//!
//! where every `C_k` is a combination of nested commutators of `A` and `B`.
//! Truncating the correction product after `C_k` leaves a local defect of
//! order `t^(k+1)`.
//!
//! The correction matrices are hardcoded up to order 4 and certified at
//! construction time: the Taylor coefficients (in `t`) of the truncated
//! product are rebuilt by series multiplication and compared against those
//! of `exp(t(A+B))` degree by degree. Published sign conventions for the
//! order-4 term vary, so a failed certification rejects the expansion
//! instead of returning a wrong-order scheme.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{commutator, Matrix};

/// Largest supported correction order.
pub const MAX_ORDER: u32 = 4;

/// Relative defect allowed when certifying a correction coefficient.
pub const CERTIFICATION_TOL: f64 = 1e-10;

/// Ordered correction matrices `C_2 .. C_order` for a given operator pair.
#[derive(Debug, Clone)]
pub struct ZassenhausExpansion {
    order: u32,
    corrections: Vec<Matrix>,
}

impl ZassenhausExpansion {
    /// Builds and certifies the corrections for `(a, b)` up to `order`.
    ///
    /// `order = 1` is the bare Lie-Trotter product (no corrections).
    pub fn new(a: &Matrix, b: &Matrix, order: u32) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::UnsupportedOrder(order));
        }
        if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
            return Err(Error::Shape("operator pair must be square and of equal dimension"));
        }

        let mut corrections = Vec::new();
        if order >= 2 {
            let ab = commutator(a, b)?;
            // C2 = -1/2 [A,B]
            corrections.push(ab.scaled(-0.5));
            if order >= 3 {
                // C3 = 1/3 [B,[A,B]] + 1/6 [A,[A,B]]
                let b_ab = commutator(b, &ab)?;
                let a_ab = commutator(a, &ab)?;
                corrections.push(b_ab.scaled(1.0 / 3.0).add(&a_ab.scaled(1.0 / 6.0)));
                if order >= 4 {
                    // C4 = -1/24 [A,[A,[A,B]]] - 1/8 [B,[A,[A,B]]] - 1/8 [B,[B,[A,B]]]
                    let a_a_ab = commutator(a, &a_ab)?;
                    let b_a_ab = commutator(b, &a_ab)?;
                    let b_b_ab = commutator(b, &b_ab)?;
                    corrections.push(
                        a_a_ab
                            .scaled(-1.0 / 24.0)
                            .add(&b_a_ab.scaled(-1.0 / 8.0))
                            .add(&b_b_ab.scaled(-1.0 / 8.0)),
                    );
                }
            }
        }

        let expansion = Self { order, corrections };
        for k in 1..=order {
            let defect = expansion.taylor_defect(a, b, k)?;
            if !(defect <= CERTIFICATION_TOL) {
                return Err(Error::Certification { order: k, defect });
            }
        }
        Ok(expansion)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Correction matrices `C_2 .. C_order`; empty for order 1.
    pub fn corrections(&self) -> &[Matrix] {
        &self.corrections
    }

    /// Relative defect of the degree-`k` Taylor coefficient of the product
    /// `exp(tA) exp(tB) exp(C2 t^2) ... exp(C_k t^k)` against that of
    /// `exp(t(A+B))`, built by truncated series multiplication.
    ///
    /// This is the certification oracle: it exercises none of the
    /// commutator formulas above, only series arithmetic.
    pub fn taylor_defect(&self, a: &Matrix, b: &Matrix, k: u32) -> Result<f64> {
        if k > self.order {
            return Err(Error::UnsupportedOrder(k));
        }
        let deg = k as usize;
        let mut product = exp_series(a, 1, deg);
        product = series_mul(&product, &exp_series(b, 1, deg), deg);
        for (idx, c) in self.corrections.iter().enumerate() {
            let weight = idx + 2;
            if weight > deg {
                break;
            }
            product = series_mul(&product, &exp_series(c, weight, deg), deg);
        }

        // degree-k coefficient of exp(t(A+B)) is (A+B)^k / k!
        let sum = a.add(b);
        let mut expected = Matrix::identity(a.rows());
        for j in 1..=deg {
            expected = expected.matmul(&sum).scaled(1.0 / j as f64);
        }

        let diff = product[deg].sub(&expected).norm_max();
        let scale = f64::max(1.0, expected.norm_max());
        Ok(diff / scale)
    }
}

/// Truncated series of `exp(t^weight X)` as matrix coefficients of
/// `t^0 .. t^deg`.
fn exp_series(x: &Matrix, weight: usize, deg: usize) -> Vec<Matrix> {
    let n = x.rows();
    let mut coeffs = vec![Matrix::zeros(n, n); deg + 1];
    coeffs[0] = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    let mut j = 0usize;
    while (j + 1) * weight <= deg {
        j += 1;
        term = term.matmul(x).scaled(1.0 / j as f64);
        coeffs[j * weight] = coeffs[j * weight].add(&term);
    }
    coeffs
}

/// Product of two truncated matrix polynomials, truncated at `deg`.
fn series_mul(p: &[Matrix], q: &[Matrix], deg: usize) -> Vec<Matrix> {
    let n = p[0].rows();
    let mut out = vec![Matrix::zeros(n, n); deg + 1];
    for (i, pi) in p.iter().enumerate().take(deg + 1) {
        if pi.norm_max() == 0.0 {
            continue;
        }
        for (j, qj) in q.iter().enumerate().take(deg + 1 - i) {
            if qj.norm_max() == 0.0 {
                continue;
            }
            out[i + j] = out[i + j].add(&pi.matmul(qj));
        }
    }
    out
}
