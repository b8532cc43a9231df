use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::system::norm2;
use crate::ifs::IfsSystem;

/// Frequencies below this (sup norm) end the product.
pub const DEFAULT_FOURIER_TOL: f64 = 1e-16;

const MAX_FACTORS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierValue {
    pub value: Complex64,
    pub factors: usize,
    /// Bound on `|product of omitted factors - 1|`.
    pub tail_bound: f64,
}

/// `m(lambda) = sum_b p_b exp(i 2 pi lambda . M^-1 b)`.
pub fn mask(sys: &IfsSystem, lambda: &[f64]) -> Complex64 {
    sys.weights()
        .iter()
        .zip(sys.shifts())
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, s)| {
            let phase = 2.0 * PI * lambda.iter().zip(s).map(|(l, v)| l * v).sum::<f64>();
            Complex64::from_polar(*p, phase)
        })
        .sum()
}

/// `mu^(lambda) = integral exp(i 2 pi lambda . x) dmu(x)` as the product
/// `prod_{k >= 0} m(M^-kt lambda)`, stopped once the frequency drops below `tol`.
pub fn fourier_eval(sys: &IfsSystem, lambda: &[f64], tol: f64) -> Result<FourierValue> {
    if lambda.len() != sys.dim() {
        return Err(Error::DimensionMismatch { expected: sys.dim(), found: lambda.len() });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("truncation tolerance must be positive, got {tol}")));
    }
    let mut value = Complex64::new(1.0, 0.0);
    let mut freq = lambda.to_vec();
    let mut factors = 0;
    while freq.iter().fold(0.0f64, |a, v| a.max(v.abs())) >= tol {
        if factors == MAX_FACTORS {
            return Err(Error::InvalidArgument(format!("fourier product did not reach tol {tol} in {MAX_FACTORS} factors")));
        }
        value *= mask(sys, &freq);
        freq = sys.m_inv_t_apply(&freq);
        factors += 1;
    }
    // |1 - m(mu)| <= 2 pi |mu| max|M^-1 b| and |M^-kt mu| <= c^k |mu|.
    let smax = sys.shifts().iter().map(|s| norm2(s)).fold(0.0, f64::max);
    let tail_bound = 2.0 * PI * norm2(&freq) * smax / (1.0 - sys.contraction());
    Ok(FourierValue { value, factors, tail_bound })
}

/// `|mu^(lambda) - m(lambda) mu^(M^-t lambda)|` with the product evaluator on both sides.
pub fn scaling_residual(sys: &IfsSystem, lambda: &[f64], tol: f64) -> Result<f64> {
    let lhs = fourier_eval(sys, lambda, tol)?.value;
    let rhs = mask(sys, lambda) * fourier_eval(sys, &sys.m_inv_t_apply(lambda), tol)?.value;
    Ok((lhs - rhs).norm())
}
