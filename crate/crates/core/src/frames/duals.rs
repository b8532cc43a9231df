use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{Enumeration, FunctionCoeffs, GramWindow};
use crate::ifs::{chaos_sample, ChaosConfig, IfsSystem};
use crate::kaczmarz::{dual_sequence, LengthPolicy, ProjectionSystem};
use crate::linalg::{ComplexMatrix, ComplexVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Monic lower-triangular `c` with `g_n = sum_{j <= n} c[n][j] e_j`.
#[derive(Debug, Clone)]
pub struct CoefficientDual {
    c: ComplexMatrix,
    /// `max |c - conj(L^-1)|` against an independent forward substitution,
    /// `L` the unit lower triangle of `G`.
    pub triangular_defect: f64,
    /// `max |G[n][m] - sum_{j <= n} G[n][j] <g_j, e_m>|`, the relation `P_n T_n = 0` read through `G`.
    pub relation_defect: f64,
}

impl CoefficientDual {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn size(&self) -> usize {
        self.c.rows()
    }

    /// `<g_n, f>` from `v_j = <e_j, f>`: `sum_j conj(c[n][j]) v_j`.
    pub fn coefficients(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.size();
        if v.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: v.len() });
        }
        Ok((0..n).map(|i| (0..=i).map(|j| self.c.get(i, j).conj() * v[j]).sum()).collect())
    }

    /// `<g_m, g_n> = sum_{i,k} conj(c[m][i]) G[i][k] c[n][k]`.
    pub fn dual_gram(&self, w: &GramWindow) -> ComplexMatrix {
        let c = &self.c;
        let conj = ComplexMatrix::from_fn(c.rows(), c.cols(), |i, j| c.get(i, j).conj());
        let transpose = ComplexMatrix::from_fn(c.cols(), c.rows(), |i, j| c.get(j, i));
        &(&conj * w.matrix()) * &transpose
    }
}

/// The recursion `g_n = e_n - sum_{j<n} <e_j, e_n> g_j` with `<e_j, e_n> = G[j][n]`.
#[allow(non_snake_case)]
pub fn kaczmarz_duals_L2mu(w: &GramWindow) -> CoefficientDual {
    let g = w.matrix();
    let n = w.size();
    let mut c = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let mut row = vec![ZERO; n];
        row[i] = Complex64::new(1.0, 0.0);
        for j in 0..i {
            let gji = g.get(j, i);
            for k in 0..=j {
                row[k] -= gji * c.get(j, k);
            }
        }
        for (k, v) in row.into_iter().enumerate().take(i + 1) {
            c.set(i, k, v);
        }
    }
    // Forward substitution for L x = e_k, column by column.
    let mut triangular_defect = 0.0f64;
    for k in 0..n {
        let mut x = vec![ZERO; n];
        for i in k..n {
            let mut s = if i == k { Complex64::new(1.0, 0.0) } else { ZERO };
            for j in k..i {
                s -= g.get(i, j) * x[j];
            }
            x[i] = s;
        }
        for i in k..n {
            triangular_defect = triangular_defect.max((c.get(i, k).conj() - x[i]).norm());
        }
    }
    // a[j][m] = <g_j, e_m>
    let a = ComplexMatrix::from_fn(n, n, |j, m| (0..=j).map(|k| c.get(j, k).conj() * g.get(k, m)).sum());
    let mut relation_defect = 0.0f64;
    for i in 0..n {
        for m in 0..n {
            let s: Complex64 = (0..=i).map(|j| g.get(i, j) * a.get(j, m)).sum();
            relation_defect = relation_defect.max((s - g.get(i, m)).norm());
        }
    }
    CoefficientDual { c, triangular_defect, relation_defect }
}

#[derive(Debug, Clone, Serialize)]
pub struct ParsevalDefect {
    pub defect: f64,
    /// `sum_n |<g_n, f>|^2`
    pub frame_sum: f64,
    pub norm_sqr: f64,
}

fn relative_defect(u: &[Complex64], norm_sqr: f64) -> ParsevalDefect {
    let frame_sum: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let defect = if norm_sqr == 0.0 { 0.0 } else { (frame_sum - norm_sqr).abs() / norm_sqr };
    ParsevalDefect { defect, frame_sum, norm_sqr }
}

/// `|sum_n |<g_n, f>|^2 - |f|^2| / |f|^2`, every inner product read from the window.
/// Zero for `f = 0`.
#[allow(non_snake_case)]
pub fn parseval_defect_L2mu(w: &GramWindow, duals: &CoefficientDual, f: &FunctionCoeffs) -> Result<ParsevalDefect> {
    let v = f.window_inner_products(w)?;
    let u = duals.coefficients(&v)?;
    Ok(relative_defect(&u, f.norm_sqr(w)?))
}

/// Parseval defect of `f` over nested windows of the given sizes.
pub fn defect_curve(sys: &IfsSystem, enumeration: Enumeration, sizes: &[usize], tol: f64, f: &FunctionCoeffs) -> Result<Vec<(usize, f64)>> {
    sizes
        .iter()
        .map(|&size| {
            let w = crate::frames::gram_window(sys, enumeration, size, tol)?;
            let d = kaczmarz_duals_L2mu(&w);
            Ok((size, parseval_defect_L2mu(&w, &d, f)?.defect))
        })
        .collect()
}

/// Taylor coefficients `<g_n, f>` of the Cauchy-type transform of `f`.
#[derive(Debug, Clone, Serialize)]
pub struct CauchyCoefficients {
    pub coeffs: Vec<Complex64>,
    /// `<e_n, f>`
    pub inner_products: Vec<Complex64>,
    /// Hardy-space norm of the truncation, `sum |<g_n, f>|^2`.
    pub hardy_norm_sqr: f64,
    pub isometry_defect: f64,
}

pub fn cauchy_coeffs(w: &GramWindow, duals: &CoefficientDual, f: &FunctionCoeffs) -> Result<CauchyCoefficients> {
    let v = f.window_inner_products(w)?;
    let u = duals.coefficients(&v)?;
    let r = relative_defect(&u, f.norm_sqr(w)?);
    Ok(CauchyCoefficients { coeffs: u, inner_products: v, hardy_norm_sqr: r.frame_sum, isometry_defect: r.defect })
}

#[derive(Debug, Clone, Serialize)]
pub struct CauchyIdentity {
    /// Largest coefficient of `U(z) C(z) - V(z)` below degree `N`.
    pub coefficient_residual: f64,
    pub z: f64,
    /// `|U_N(z) C_N(z) - V_N(z)|` for the truncated series.
    pub value_residual: f64,
    /// Bound on the degree `>= N` part of `U_N C_N`.
    pub truncation_bound: f64,
}

/// Checks `sum_n <g_n, f> z^n * sum_n conj(mu^(n)) z^n = sum_n <e_n, f> z^n`,
/// which holds degree by degree below the window size for the natural 1D enumeration.
pub fn cauchy_identity(w: &GramWindow, cc: &CauchyCoefficients, z: f64) -> Result<CauchyIdentity> {
    if w.enumeration() != Enumeration::Natural1d {
        return Err(Error::InvalidArgument("the Cauchy identity needs the 1d-natural enumeration".into()));
    }
    let n = w.size();
    let c: Vec<Complex64> = (0..n).map(|k| w.matrix().get(0, k).conj()).collect();
    let u = &cc.coeffs;
    let v = &cc.inner_products;
    let mut product = vec![ZERO; 2 * n - 1];
    for i in 0..n {
        for j in 0..n {
            product[i + j] += u[i] * c[j];
        }
    }
    let coefficient_residual = (0..n).map(|k| (product[k] - v[k]).norm()).fold(0.0, f64::max);
    let eval = |coef: &[Complex64]| coef.iter().rev().fold(ZERO, |acc, a| acc * z + a);
    let value_residual = (eval(&product[..n]) + eval(&product[n..]) * z.powi(n as i32) - eval(v)).norm();
    let truncation_bound = product[n..].iter().enumerate().map(|(k, a)| a.norm() * z.abs().powi((n + k) as i32)).sum();
    Ok(CauchyIdentity { coefficient_residual, z, value_residual, truncation_bound })
}

/// `sum_n |<g_n, e_m>|^2` for each window index `m`, computed through `c G` and through
/// explicit dual vectors of the columns of `G^(1/2)`; returns the largest disagreement.
pub fn frame_operator_two_ways(w: &GramWindow, duals: &CoefficientDual) -> Result<f64> {
    let n = w.size();
    let g = w.matrix();
    let c = duals.matrix();
    let via_gram: Vec<f64> = (0..n)
        .map(|m| (0..n).map(|i| (0..=i).map(|j| c.get(i, j).conj() * g.get(j, m)).sum::<Complex64>().norm_sqr()).sum())
        .collect();
    let sys = ProjectionSystem::from_gram(g, LengthPolicy::Finite)?;
    let e = sys.unit_vectors(n - 1)?;
    let dual = dual_sequence(&e)?;
    let via_vectors: Vec<f64> = (0..n).map(|m| dual.coefficients(&e[m]).iter().map(|z| z.norm_sqr()).sum()).collect();
    Ok(via_gram.iter().zip(&via_vectors).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingReport {
    pub quadrature_points: usize,
    /// `max |<e_j, g_n>_emb - (G c^T)[j][n]|`
    pub max_diff: f64,
    /// `1 / sqrt(quadrature_points)`
    pub quadrature_scale: f64,
}

/// Embeds the window's exponentials as `(e_n(x_s) / sqrt(S))_s` over `S` chaos-game points,
/// runs the vector dual recursion there and compares `<e_j, g_n>` with the Gram-based duals.
pub fn embedding_check(w: &GramWindow, duals: &CoefficientDual, points: usize, seed: u64) -> Result<EmbeddingReport> {
    let sys = w.system();
    let cloud = chaos_sample(sys, &ChaosConfig::new(points, seed))?;
    let scale = 1.0 / (points as f64).sqrt();
    let e: Vec<ComplexVector> = w
        .indices()
        .iter()
        .map(|n| {
            cloud
                .points()
                .map(|x| Complex64::from_polar(scale, 2.0 * PI * n.iter().zip(x).map(|(k, v)| *k as f64 * v).sum::<f64>()))
                .collect::<Vec<_>>()
                .into()
        })
        .collect();
    let dual = dual_sequence(&e)?;
    let g = w.matrix();
    let c = duals.matrix();
    let size = w.size();
    let mut max_diff = 0.0f64;
    for (nn, gn) in dual.g.iter().enumerate() {
        for (j, ej) in e.iter().enumerate() {
            let exact: Complex64 = (0..=nn).map(|k| c.get(nn, k) * g.get(j, k)).sum();
            max_diff = max_diff.max((ej.inner(gn) - exact).norm());
        }
    }
    debug_assert_eq!(dual.g.len(), size);
    Ok(EmbeddingReport { quadrature_points: points, max_diff, quadrature_scale: scale })
}
