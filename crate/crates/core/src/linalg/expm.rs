//! Dense matrix exponential by scaling and squaring.
//!
//! The scaled matrix `B = tA / 2^s` is brought below `||B||_inf <= 0.5`,
//! approximated with the diagonal [6/6] Pade approximant and squared `s`
//! times. At that scaled norm the Pade backward error is ~2e-17, safely
//! under unit roundoff, so the result is accurate to rounding for
//! desk-scale matrices.

use alloc::vec;
use alloc::vec::Vec;

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Coefficients of the [6/6] Pade numerator p(x) = sum c_j x^j
/// (denominator is p(-x)).
const PADE6: [f64; 7] = [
    1.0,
    1.0 / 2.0,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
];

/// Computes `exp(t A)`.
///
/// Fails with a shape error for non-square input and with a range error
/// when `t A` or the exponential leaves the representable range.
pub fn matrix_exp(a: &Matrix, t: f64) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::Shape("matrix exponential requires a square matrix"));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("time argument of matrix exponential"));
    }

    let b = a.scaled(t);
    if !b.all_finite() {
        return Err(Error::Overflow("t * A is not representable"));
    }

    let eta = b.norm_inf();
    let squarings = if eta <= 0.5 {
        0
    } else {
        libm::ceil(libm::log2(eta / 0.5)) as u32
    };
    let scaled = b.scaled(libm::exp2(-(squarings as f64)));

    let mut result = pade6(&scaled)?;
    for _ in 0..squarings {
        result = result.matmul(&result);
        if !result.all_finite() {
            return Err(Error::Overflow("matrix exponential overflowed during squaring"));
        }
    }
    Ok(result)
}

/// Diagonal [6/6] Pade approximant of exp(B) for ||B|| <= 0.5.
fn pade6(b: &Matrix) -> Result<Matrix> {
    let n = b.rows();
    let id = Matrix::identity(n);
    let b2 = b.matmul(b);
    let b4 = b2.matmul(&b2);
    let b6 = b4.matmul(&b2);

    // odd part U = B (c1 I + c3 B^2 + c5 B^4), even part V = c0 I + c2 B^2 + c4 B^4 + c6 B^6
    let inner = id
        .scaled(PADE6[1])
        .add(&b2.scaled(PADE6[3]))
        .add(&b4.scaled(PADE6[5]));
    let u = b.matmul(&inner);
    let v = id
        .scaled(PADE6[0])
        .add(&b2.scaled(PADE6[2]))
        .add(&b4.scaled(PADE6[4]))
        .add(&b6.scaled(PADE6[6]));

    // (V - U) X = (V + U)
    solve(v.sub(&u), v.add(&u))
}

/// Solves `A X = B` by LU factorization with partial pivoting.
fn solve(a: Matrix, b: Matrix) -> Result<Matrix> {
    let n = a.rows();
    let mut lu: Vec<f64> = a.as_slice().to_vec();
    let mut x: Vec<f64> = b.as_slice().to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let mut pivot = k;
        let mut best = libm::fabs(lu[k * n + k]);
        for i in k + 1..n {
            let cand = libm::fabs(lu[i * n + k]);
            if cand > best {
                best = cand;
                pivot = i;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return Err(Error::Overflow("singular Pade denominator"));
        }
        if pivot != k {
            for j in 0..n {
                lu.swap(k * n + j, pivot * n + j);
            }
            perm.swap(k, pivot);
        }
        let diag = lu[k * n + k];
        for i in k + 1..n {
            let factor = lu[i * n + k] / diag;
            lu[i * n + k] = factor;
            for j in k + 1..n {
                lu[i * n + j] -= factor * lu[k * n + j];
            }
        }
    }

    // apply the row permutation to the right-hand side
    let mut rhs = vec![0.0; n * n];
    for (i, &p) in perm.iter().enumerate() {
        rhs[i * n..(i + 1) * n].copy_from_slice(&x[p * n..(p + 1) * n]);
    }
    x = rhs;

    // forward substitution (unit lower triangle)
    for i in 1..n {
        for k in 0..i {
            let factor = lu[i * n + k];
            if factor == 0.0 {
                continue;
            }
            for j in 0..n {
                x[i * n + j] -= factor * x[k * n + j];
            }
        }
    }
    // back substitution
    for i in (0..n).rev() {
        for k in i + 1..n {
            let factor = lu[i * n + k];
            if factor == 0.0 {
                continue;
            }
            for j in 0..n {
                x[i * n + j] -= factor * x[k * n + j];
            }
        }
        let diag = lu[i * n + i];
        for j in 0..n {
            x[i * n + j] /= diag;
        }
    }

    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::Overflow("linear solve produced non-finite entries"));
    }
    Ok(Matrix::from_vec(n, n, x).expect("solve output validated finite"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::Vector;

    #[test]
    fn exp_of_zero_is_identity() {
        let z = Matrix::zeros(4, 4);
        let e = matrix_exp(&z, 3.7).unwrap();
        assert_eq!(e, Matrix::identity(4));
    }

    #[test]
    fn exp_of_diagonal() {
        let d = Matrix::from_diagonal(&[3.0, -2.0]).unwrap();
        let e = matrix_exp(&d, 1.0).unwrap();
        assert!((e[(0, 0)] - libm::exp(3.0)).abs() < 1e-13 * libm::exp(3.0));
        assert!((e[(1, 1)] - libm::exp(-2.0)).abs() < 1e-13);
        assert_eq!(e[(0, 1)], 0.0);
        assert_eq!(e[(1, 0)], 0.0);
    }

    #[test]
    fn exp_matches_closed_form_on_demo_matrix() {
        // u(1) for u' = [[1,2],[3,0]] u, u(0) = (0,1): first component
        // 2(e^3 - e^-2)/5, second 0.4 e^3 + 0.6 e^-2 (eigendecomposition).
        let m = Matrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 0.0]).unwrap();
        let e = matrix_exp(&m, 1.0).unwrap();
        let u = e.matvec(&Vector::from_vec(vec![0.0, 1.0]).unwrap());
        let u1 = 2.0 * (libm::exp(3.0) - libm::exp(-2.0)) / 5.0;
        let u2 = 0.4 * libm::exp(3.0) + 0.6 * libm::exp(-2.0);
        assert!((u[0] - u1).abs() < 1e-12, "u1 = {} vs {}", u[0], u1);
        assert!((u[1] - u2).abs() < 1e-12, "u2 = {} vs {}", u[1], u2);
    }

    #[test]
    fn exp_agrees_with_taylor_series() {
        // independent oracle: truncated Taylor sum for ||tA|| <= 1
        let a = Matrix::from_vec(
            3,
            3,
            vec![0.21, -0.11, 0.05, 0.13, 0.02, -0.3, -0.07, 0.17, 0.09],
        )
        .unwrap();
        let t = 1.5;
        let e = matrix_exp(&a, t).unwrap();
        let mut sum = Matrix::identity(3);
        let mut term = Matrix::identity(3);
        for k in 1..=30 {
            term = term.matmul(&a.scaled(t)).scaled(1.0 / k as f64);
            sum = sum.add(&term);
        }
        assert!(e.sub(&sum).norm_max() < 1e-10);
    }

    #[test]
    fn non_square_is_shape_error() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(matrix_exp(&a, 1.0), Err(Error::Shape(_))));
    }

    #[test]
    fn extreme_norm_is_range_error() {
        let a = Matrix::from_diagonal(&[1e3, 1e3]).unwrap();
        assert!(matches!(matrix_exp(&a, 1e3), Err(Error::Overflow(_))));
    }
}
