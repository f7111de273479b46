//! Dense row-major matrices and vectors over `f64`.
//!
//! Construction validates finiteness; the arithmetic helpers assume
//! compatible dimensions and panic otherwise, mirroring the usual dense
//! linear-algebra convention. Fallible dimension handling lives at the
//! operation boundaries that can reasonably receive mismatched input
//! ([`commutator`], [`crate::linalg::matrix_exp`], the step routines).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense real matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Invalid("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape("entry count must equal rows * cols"));
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("matrix entries must be finite"));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix entrywise from `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_vec(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            if !d.is_finite() {
                return Err(Error::NonFinite("diagonal entries must be finite"));
            }
            m[(i, i)] = d;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Sum with `other`. Panics on dimension mismatch.
    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Difference with `other`. Panics on dimension mismatch.
    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub: shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled(&self, k: f64) -> Matrix {
        let data = self.data.iter().map(|a| a * k).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Matrix product `self * other`. Panics on dimension mismatch.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul: inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.data[i * self.cols + k];
                if aik == 0.0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += aik * b;
                }
            }
        }
        out
    }

    /// Matrix-vector product. Panics on dimension mismatch.
    pub fn matvec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim(), "matvec: dimension mismatch");
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            out[i] = row.iter().zip(v.as_slice()).map(|(a, x)| a * x).sum();
        }
        Vector { data: out }
    }

    /// Induced infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .map(|x| libm::fabs(*x))
                    .sum()
            })
            .fold(0.0, f64::max)
    }

    /// Largest absolute entry.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|x| libm::fabs(*x)).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

/// Dense real vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

/// Vector norm selector for error measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VectorNorm {
    /// max_i |v_i|
    Max,
    /// sqrt(sum v_i^2)
    L2,
    /// sqrt(dx * sum v_i^2), the grid-weighted l2 norm
    DiscreteL2 { dx: f64 },
}

impl Vector {
    /// Builds a vector, rejecting NaN/Inf.
    pub fn from_vec(data: Vec<f64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Invalid("vector dimension must be positive"));
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("vector entries must be finite"));
        }
        Ok(Self { data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { data: vec![0.0; dim] }
    }

    /// Standard basis vector e_j.
    pub fn basis(dim: usize, j: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[j] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "add: dimension mismatch");
        Vector { data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "sub: dimension mismatch");
        Vector { data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scaled(&self, k: f64) -> Vector {
        Vector { data: self.data.iter().map(|a| a * k).collect() }
    }

    /// In-place `self += k * other`.
    pub fn add_scaled(&mut self, k: f64, other: &Vector) {
        assert_eq!(self.dim(), other.dim(), "add_scaled: dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += k * b;
        }
    }

    /// Norm of the vector in the requested sense.
    ///
    /// The vector is nonempty by construction; `DiscreteL2` requires a
    /// positive grid spacing.
    pub fn norm(&self, kind: VectorNorm) -> Result<f64> {
        match kind {
            VectorNorm::Max => {
                Ok(self.data.iter().map(|x| libm::fabs(*x)).fold(0.0, f64::max))
            }
            VectorNorm::L2 => {
                Ok(libm::sqrt(self.data.iter().map(|x| x * x).sum()))
            }
            VectorNorm::DiscreteL2 { dx } => {
                if !(dx > 0.0) || !dx.is_finite() {
                    return Err(Error::Invalid("discrete-l2 norm requires dx > 0"));
                }
                Ok(libm::sqrt(dx * self.data.iter().map(|x| x * x).sum::<f64>()))
            }
        }
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.data[i]
    }
}

/// Commutator `[A, B] = AB - BA`.
pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::Shape("commutator requires square matrices of equal dimension"));
    }
    Ok(a.matmul(b).sub(&b.matmul(a)))
}
