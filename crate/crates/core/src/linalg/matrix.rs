use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ComplexVector;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&v| Complex64::new(v, 0.0)));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Stacks vectors as the rows of a matrix.
    pub fn from_rows(rows: &[ComplexVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, ComplexVector::dim);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            row.check_dim(cols)?;
            data.extend_from_slice(row.as_slice());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Rank-one operator `|u><v|`, i.e. `x -> <v, x> u`.
    pub fn outer(u: &ComplexVector, v: &ComplexVector) -> Self {
        Self::from_fn(u.dim(), v.dim(), |i, j| u[i] * v[j].conj())
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> ComplexVector {
        ComplexVector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::new((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn as_row_major(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn mul_vec(&self, x: &ComplexVector) -> ComplexVector {
        debug_assert_eq!(self.cols, x.dim());
        let xs = x.as_slice();
        ComplexVector::new(
            self.data
                .chunks_exact(self.cols.max(1))
                .take(self.rows)
                .map(|row| row.iter().zip(xs).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.data.is_empty() {
            return Vec::new();
        }
        let mut values: Vec<f64> = self.to_nalgebra().singular_values().iter().copied().collect();
        values.sort_by(|a, b| b.total_cmp(a));
        values
    }

    /// Spectral norm (largest singular value).
    pub fn operator_norm(&self) -> f64 {
        if self.data.iter().all(|z| *z == ZERO) {
            return 0.0;
        }
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is read.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let eig = self.to_nalgebra().symmetric_eigen();
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    /// Hermitian square root `A^{1/2}` of a positive semidefinite matrix; tiny
    /// negative eigenvalues are clamped to zero.
    pub fn hermitian_sqrt(&self) -> Result<ComplexMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let eig = self.to_nalgebra().symmetric_eigen();
        let n = self.rows;
        let vecs = &eig.eigenvectors;
        let roots: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
        Ok(Self::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| vecs[(i, k)] * roots[k] * vecs[(j, k)].conj())
                .sum()
        }))
    }

    /// Reciprocal 2-norm condition number `sigma_min / sigma_max`.
    pub fn reciprocal_condition(&self) -> f64 {
        let sv = self.singular_values();
        match (sv.first(), sv.last()) {
            (Some(&max), Some(&min)) if max > 0.0 => min / max,
            _ => 0.0,
        }
    }

    /// `Singular` when the reciprocal condition number is below 1e-14.
    pub fn check_invertible(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let rcond = self.reciprocal_condition();
        if rcond < 1e-14 {
            return Err(Error::Singular { rcond });
        }
        Ok(())
    }

    pub fn solve(&self, rhs: &ComplexVector) -> Result<ComplexVector> {
        self.check_invertible()?;
        rhs.check_dim(self.rows)?;
        let b = nalgebra::DVector::from_column_slice(rhs.as_slice());
        let x = self
            .to_nalgebra()
            .lu()
            .solve(&b)
            .ok_or(Error::Singular { rcond: 0.0 })?;
        Ok(ComplexVector::new(x.iter().copied().collect()))
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        self.check_invertible()?;
        let inv = self
            .to_nalgebra()
            .try_inverse()
            .ok_or(Error::Singular { rcond: 0.0 })?;
        Ok(Self::from_nalgebra(&inv))
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn arb_matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, k)| {
            proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), r * k).prop_map(move |v| {
                ComplexMatrix::from_row_major(r, k, v.into_iter().map(|(a, b)| c(a, b)).collect())
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn adjoint_is_an_involution(a in arb_matrix(6)) {
            prop_assert_eq!(a.adjoint().adjoint(), a);
        }

        #[test]
        fn operator_norm_is_nonnegative_and_bounded_by_frobenius(a in arb_matrix(6)) {
            let n = a.operator_norm();
            prop_assert!(n >= 0.0);
            prop_assert!(n <= a.frobenius_norm() * (1.0 + 1e-12));
            prop_assert!(a.frobenius_norm() <= n * (a.rows().min(a.cols()) as f64).sqrt() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn operator_norm_vanishes_only_on_zero() {
        assert_eq!(ComplexMatrix::zeros(3, 2).operator_norm(), 0.0);
        let mut m = ComplexMatrix::zeros(3, 2);
        m.set(2, 1, c(0.0, 1e-9));
        assert!((m.operator_norm() - 1e-9).abs() < 1e-20);
    }

    #[test]
    fn outer_product_acts_as_rank_one_operator() {
        let u = ComplexVector::new(vec![c(1.0, 2.0), c(0.0, -1.0)]);
        let v = ComplexVector::new(vec![c(0.5, 0.5), c(3.0, 0.0)]);
        let x = ComplexVector::new(vec![c(-1.0, 0.25), c(2.0, 2.0)]);
        let lhs = ComplexMatrix::outer(&u, &v).mul_vec(&x);
        let rhs = u.scale(v.inner(&x));
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn hermitian_eigenvalues_of_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)])
            .unwrap();
        let ev = m.hermitian_eigenvalues().unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_sqrt_squares_back() {
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)])
            .unwrap();
        let r = m.hermitian_sqrt().unwrap();
        assert!((&(&r * &r) - &m).operator_norm() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(m.inverse(), Err(Error::Singular { .. })));
        let b = ComplexVector::from_real(&[1.0, 1.0]);
        assert!(matches!(m.solve(&b), Err(Error::Singular { .. })));
    }

    #[test]
    fn solve_matches_inverse() {
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.5)])
            .unwrap();
        let b = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 2.0)]);
        let x = m.solve(&b).unwrap();
        assert!(m.mul_vec(&x).max_abs_diff(&b) < 1e-14);
        assert!(m.inverse().unwrap().mul_vec(&b).max_abs_diff(&x) < 1e-14);
    }
}
