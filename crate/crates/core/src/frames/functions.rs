use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::GramWindow;
use crate::ifs::{fourier_eval, IfsSystem};

/// `f = sum_k a_k e_k`, a trigonometric polynomial with frequencies in `Z^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionCoeffs {
    pub terms: Vec<(Vec<i64>, Complex64)>,
}

impl FunctionCoeffs {
    pub fn new(terms: Vec<(Vec<i64>, Complex64)>) -> Self {
        Self { terms }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn exponential(n: Vec<i64>) -> Self {
        Self { terms: vec![(n, Complex64::new(1.0, 0.0))] }
    }

    pub fn constant(dim: usize) -> Self {
        Self::exponential(vec![0; dim])
    }

    /// `cos(2 pi freq x_axis) = (e_{freq u} + e_{-freq u}) / 2`.
    pub fn cosine(dim: usize, axis: usize, freq: i64) -> Self {
        let mut plus = vec![0; dim];
        plus[axis] = freq;
        let minus: Vec<i64> = plus.iter().map(|v| -v).collect();
        Self { terms: vec![(plus, Complex64::new(0.5, 0.0)), (minus, Complex64::new(0.5, 0.0))] }
    }

    pub(crate) fn check(&self, dim: usize) -> Result<()> {
        match self.terms.iter().find(|(k, _)| k.len() != dim) {
            Some((k, _)) => Err(Error::DimensionMismatch { expected: dim, found: k.len() }),
            None => Ok(()),
        }
    }

    /// `<e_n, f> = sum_k a_k mu^(k - n)` for every window index `n`.
    pub fn window_inner_products(&self, w: &GramWindow) -> Result<Vec<Complex64>> {
        self.check(w.system().dim())?;
        w.indices()
            .iter()
            .map(|n| {
                self.terms.iter().try_fold(Complex64::new(0.0, 0.0), |acc, (k, a)| {
                    let d: Vec<i64> = k.iter().zip(n).map(|(x, y)| x - y).collect();
                    Ok(acc + a * w.mu_hat(&d)?)
                })
            })
            .collect()
    }

    /// `|f|^2 = sum_{k,l} conj(a_k) a_l mu^(l - k)`.
    pub fn norm_sqr(&self, w: &GramWindow) -> Result<f64> {
        self.norm_sqr_in(w.system(), w.tol())
    }

    /// `|f|^2` in `L^2` of the invariant measure of `sys`.
    pub fn norm_sqr_in(&self, sys: &IfsSystem, tol: f64) -> Result<f64> {
        self.check(sys.dim())?;
        let mut s = Complex64::new(0.0, 0.0);
        for (k, a) in &self.terms {
            for (l, b) in &self.terms {
                let d: Vec<f64> = l.iter().zip(k).map(|(x, y)| (x - y) as f64).collect();
                s += a.conj() * b * fourier_eval(sys, &d, tol)?.value;
            }
        }
        Ok(s.re.max(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::DEFAULT_FOURIER_TOL;

    #[test]
    fn norms_of_exponentials_and_cosines() {
        let sys = IfsSystem::builtin("product-lebesgue-times-cantor").unwrap();
        assert!((FunctionCoeffs::exponential(vec![3, -2]).norm_sqr_in(&sys, DEFAULT_FOURIER_TOL).unwrap() - 1.0).abs() < 1e-15);
        // Lebesgue in x: |cos(2 pi x)|^2 = 1/2.
        assert!((FunctionCoeffs::cosine(2, 0, 1).norm_sqr_in(&sys, DEFAULT_FOURIER_TOL).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(FunctionCoeffs::zero().norm_sqr_in(&sys, DEFAULT_FOURIER_TOL).unwrap(), 0.0);
        assert!(FunctionCoeffs::constant(1).norm_sqr_in(&sys, DEFAULT_FOURIER_TOL).is_err());
    }
}
