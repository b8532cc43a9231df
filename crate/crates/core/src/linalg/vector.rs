use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense vector in `C^d`.
///
/// Inner products are conjugate-linear in the first argument:
/// `u.inner(v) = sum conj(u_i) v_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self { entries }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// Standard basis vector `delta_index` in `C^dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[index] = Complex64::new(1.0, 0.0);
        v
    }

    /// Uniformly distributed unit vector (normalized complex Gaussian).
    pub fn random_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        loop {
            let v = Self::new(
                (0..dim)
                    .map(|_| {
                        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                    })
                    .collect(),
            );
            if let Ok(unit) = v.normalized() {
                return unit;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.entries.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, factor: Complex64) -> ComplexVector {
        Self::new(self.entries.iter().map(|z| z * factor).collect())
    }

    /// `self += alpha * x`
    pub fn axpy(&mut self, alpha: Complex64, x: &ComplexVector) {
        debug_assert_eq!(self.dim(), x.dim());
        for (s, v) in self.entries.iter_mut().zip(&x.entries) {
            *s += alpha * v;
        }
    }

    /// Unit vector in the direction of `self`.
    pub fn normalized(&self) -> Result<ComplexVector> {
        let norm = self.norm();
        if norm < 1e-14 || !norm.is_finite() {
            return Err(Error::ZeroVector { norm });
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexVector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &ComplexVector) -> f64 {
        (self - other).norm()
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, index: usize) -> &Complex64 {
        &self.entries[index]
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(entries: Vec<Complex64>) -> Self {
        Self::new(entries)
    }
}

impl Add for &ComplexVector {
    type Output = ComplexVector;

    fn add(self, rhs: &ComplexVector) -> ComplexVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        ComplexVector::new(
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;

    fn sub(self, rhs: &ComplexVector) -> ComplexVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        ComplexVector::new(
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &ComplexVector {
    type Output = ComplexVector;

    fn neg(self) -> ComplexVector {
        ComplexVector::new(self.entries.iter().map(|z| -z).collect())
    }
}

impl Mul<f64> for &ComplexVector {
    type Output = ComplexVector;

    fn mul(self, rhs: f64) -> ComplexVector {
        self.scale(Complex64::new(rhs, 0.0))
    }
}
