use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{IfsSystem, PointCloud};
use crate::mc::ComplexMeanEstimate;

/// Bounded continuous test functions on `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestFunction {
    Constant,
    /// `x_i`
    Coordinate { index: usize },
    /// `x_i x_j`
    Product { i: usize, j: usize },
    /// `exp(i 2 pi n . x)`
    Exponential { n: Vec<i64> },
}

impl TestFunction {
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        match self {
            Self::Constant => Complex64::new(1.0, 0.0),
            Self::Coordinate { index } => Complex64::new(x[*index], 0.0),
            Self::Product { i, j } => Complex64::new(x[*i] * x[*j], 0.0),
            Self::Exponential { n } => {
                Complex64::from_polar(1.0, 2.0 * PI * n.iter().zip(x).map(|(k, v)| *k as f64 * v).sum::<f64>())
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Constant => "1".into(),
            Self::Coordinate { index } => format!("x{}", index + 1),
            Self::Product { i, j } => format!("x{}*x{}", i + 1, j + 1),
            Self::Exponential { n } => format!("e{n:?}"),
        }
    }

    fn check(&self, dim: usize) -> Result<()> {
        let ok = match self {
            Self::Constant => true,
            Self::Coordinate { index } => *index < dim,
            Self::Product { i, j } => *i < dim && *j < dim,
            Self::Exponential { n } => n.len() == dim,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("test function {} does not fit dimension {dim}", self.label())))
        }
    }

    /// `1, x_1, x_2, x_1 x_2` (as far as the dimension allows) and `e_n` for `|n|_inf <= max_freq`, `n != 0`.
    pub fn panel(dim: usize, max_freq: i64) -> Vec<Self> {
        let mut out = vec![Self::Constant];
        out.extend((0..dim.min(2)).map(|index| Self::Coordinate { index }));
        out.push(if dim >= 2 { Self::Product { i: 0, j: 1 } } else { Self::Product { i: 0, j: 0 } });
        let side = (2 * max_freq + 1) as usize;
        for code in 0..side.pow(dim as u32) {
            let n: Vec<i64> = (0..dim).map(|k| (code / side.pow(k as u32) % side) as i64 - max_freq).collect();
            if n.iter().any(|&v| v != 0) {
                out.push(Self::Exponential { n });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub function: String,
    /// `E f(X)`
    pub lhs: Complex64,
    /// `sum_b p_b E f(tau_b X)`
    pub rhs: Complex64,
    pub defect: f64,
    pub std_err: f64,
    pub pass: bool,
}

/// Compares both sides of `int f dmu = sum_b p_b int f o tau_b dmu` on one shared sample.
/// The defect is the mean of `f(X) - sum_b p_b f(tau_b X)`; pass iff it is within 3 standard errors.
pub fn invariance_check(sys: &IfsSystem, f: &TestFunction, cloud: &PointCloud) -> Result<InvarianceReport> {
    f.check(sys.dim())?;
    if cloud.dim() != sys.dim() {
        return Err(Error::DimensionMismatch { expected: sys.dim(), found: cloud.dim() });
    }
    let rows: Vec<(Complex64, Complex64)> = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let x = cloud.point(i);
            let mut y = vec![0.0; x.len()];
            let mut rhs = Complex64::new(0.0, 0.0);
            for (b, p) in sys.weights().iter().enumerate() {
                if *p > 0.0 {
                    sys.tau_into(b, x, &mut y);
                    rhs += p * f.eval(&y);
                }
            }
            (f.eval(x), rhs)
        })
        .collect();
    let lhs = ComplexMeanEstimate::from_samples(&rows.iter().map(|r| r.0).collect::<Vec<_>>());
    let rhs = ComplexMeanEstimate::from_samples(&rows.iter().map(|r| r.1).collect::<Vec<_>>());
    let diff = ComplexMeanEstimate::from_samples(&rows.iter().map(|r| r.0 - r.1).collect::<Vec<_>>());
    let defect = diff.mean.norm();
    let pass = defect <= 3.0 * diff.std_err || defect <= 1e-14;
    Ok(InvarianceReport { function: f.label(), lhs: lhs.mean, rhs: rhs.mean, defect, std_err: diff.std_err, pass })
}
