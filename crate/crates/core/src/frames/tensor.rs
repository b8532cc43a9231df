use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{gram_window, kaczmarz_duals_L2mu, Enumeration, FunctionCoeffs};
use crate::ifs::{IfsSystem, SliceLaw, DEFAULT_FOURIER_TOL};
use crate::mc::{map_chunks, DEFAULT_CHUNK};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorConfig {
    /// Window side `N`: coefficients for `0 <= n_1, n_2 < N`.
    pub side: usize,
    pub samples: usize,
    /// x digits drawn per sample.
    pub depth: usize,
    pub seed: u64,
    pub batches: usize,
    /// Largest acceptable standard error of the isometry ratio.
    pub tol: Option<f64>,
    pub fourier_tol: f64,
}

impl TensorConfig {
    pub fn new(side: usize, samples: usize, seed: u64) -> Self {
        Self { side, samples, depth: 48, seed, batches: 32, tol: None, fourier_tol: DEFAULT_FOURIER_TOL }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TensorIsometry {
    pub side: usize,
    /// `coeffs[n1][n2]`
    pub coeffs: Vec<Vec<Complex64>>,
    pub coeff_norm_sqr: f64,
    pub f_norm_sqr: f64,
    pub ratio: f64,
    /// Batch-means standard error of `ratio`.
    pub ratio_std_err: f64,
    pub samples: usize,
}

/// Forward substitution with the unit lower triangle of `G[m][n] = s(n - m)`,
/// where `s(-t) = conj(s(t))`.
fn unit_lower_solve(s: &[Complex64], rhs: &mut [Complex64]) {
    for i in 0..rhs.len() {
        let mut v = rhs[i];
        for j in 0..i {
            v -= s[i - j].conj() * rhs[j];
        }
        rhs[i] = v;
    }
}

/// Coefficients of `V_mu F = V_xi((V_{sigma^x} F(x, .))(z_2))(z_1)` on an `N x N` window.
/// The x integral is a Monte Carlo average over the marginal `xi`; each slice transform uses
/// the exact conditional digit law. `|coeffs|^2 / |F|^2` is at most 1 up to quadrature error.
pub fn tensor_isometry_2d(sys: &IfsSystem, f: &FunctionCoeffs, cfg: &TensorConfig) -> Result<TensorIsometry> {
    if sys.dim() != 2 {
        return Err(Error::InvalidIfs("tensor isometry needs a planar system".into()));
    }
    if cfg.side == 0 || cfg.samples == 0 || cfg.batches == 0 || cfg.depth == 0 {
        return Err(Error::InvalidArgument("side, samples, batches and depth must be positive".into()));
    }
    f.check(2)?;
    let slices = SliceLaw::from_ifs(sys)?;
    let xi = slices.x_marginal()?;
    let xi_window = gram_window(&xi, Enumeration::Natural1d, cfg.side, cfg.fourier_tol)?;
    let xi_duals = kaczmarz_duals_L2mu(&xi_window);
    let n = cfg.side;
    let mx = f64::from(slices.digit_law().base_x);

    let mut k2s: Vec<i64> = f.terms.iter().map(|(k, _)| k[1]).collect();
    k2s.sort_unstable();
    k2s.dedup();
    let tmax = k2s.iter().map(|k| k.abs() + n as i64).max().unwrap_or(0).max(n as i64) as usize;
    let xi_digits: Vec<u32> = xi.digits().iter().map(|d| d[0] as u32).collect();

    let chunk_sums = map_chunks(cfg.samples, DEFAULT_CHUNK, cfg.seed, |rng, range| {
        let mut acc = vec![ZERO; n * n];
        let mut eps = vec![0u32; cfg.depth];
        let mut sigma = vec![ZERO; tmax + 1];
        let mut u = vec![vec![ZERO; n]; k2s.len()];
        let mut h = vec![ZERO; n];
        for _ in range {
            let mut x = 0.0;
            let mut scale = 1.0;
            for e in eps.iter_mut() {
                *e = xi_digits[xi.sample_digit(rng)];
                scale /= mx;
                x += f64::from(*e) * scale;
            }
            slices.slice_fourier_table(&eps, &mut sigma);
            let sig = |t: i64| if t >= 0 { sigma[t as usize] } else { sigma[(-t) as usize].conj() };
            for (slot, &k2) in k2s.iter().enumerate() {
                let rhs = &mut u[slot];
                for (j, r) in rhs.iter_mut().enumerate() {
                    *r = sig(k2 - j as i64);
                }
                unit_lower_solve(&sigma, rhs);
            }
            h.iter_mut().for_each(|v| *v = ZERO);
            for (k, a) in &f.terms {
                let slot = k2s.binary_search(&k[1]).unwrap();
                let phase = a * Complex64::from_polar(1.0, 2.0 * PI * k[0] as f64 * x);
                for (hv, uv) in h.iter_mut().zip(&u[slot]) {
                    *hv += phase * uv;
                }
            }
            let step = Complex64::from_polar(1.0, -2.0 * PI * x);
            let mut ej = Complex64::new(1.0, 0.0);
            for j in 0..n {
                for n2 in 0..n {
                    acc[j * n + n2] += ej * h[n2];
                }
                ej *= step;
            }
        }
        acc
    });

    let f_norm_sqr = f.norm_sqr_in(sys, cfg.fourier_tol)?;
    let finish = |sum: &[Complex64], count: usize| -> Result<(Vec<Vec<Complex64>>, f64)> {
        let mut coeffs = vec![vec![ZERO; n]; n];
        for n2 in 0..n {
            let w: Vec<Complex64> = (0..n).map(|j| sum[j * n + n2] / count as f64).collect();
            for (n1, c) in xi_duals.coefficients(&w)?.into_iter().enumerate() {
                coeffs[n1][n2] = c;
            }
        }
        let norm = coeffs.iter().flatten().map(|c| c.norm_sqr()).sum();
        Ok((coeffs, norm))
    };
    let chunks = chunk_sums.len();
    let batches = cfg.batches.min(chunks);
    let mut batch_sums = vec![vec![ZERO; n * n]; batches];
    let mut batch_counts = vec![0usize; batches];
    let mut total = vec![ZERO; n * n];
    for (c, s) in chunk_sums.iter().enumerate() {
        let b = c * batches / chunks;
        let count = DEFAULT_CHUNK.min(cfg.samples - c * DEFAULT_CHUNK);
        batch_counts[b] += count;
        for (i, v) in s.iter().enumerate() {
            batch_sums[b][i] += v;
            total[i] += v;
        }
    }
    let (coeffs, coeff_norm_sqr) = finish(&total, cfg.samples)?;
    let ratio = if f_norm_sqr > 0.0 { coeff_norm_sqr / f_norm_sqr } else { 0.0 };
    let ratio_std_err = if batches < 2 || f_norm_sqr == 0.0 {
        f64::INFINITY
    } else {
        let rs = batch_sums
            .iter()
            .zip(&batch_counts)
            .map(|(s, &c)| finish(s, c).map(|(_, v)| v / f_norm_sqr))
            .collect::<Result<Vec<_>>>()?;
        let m = rs.iter().sum::<f64>() / batches as f64;
        let var = rs.iter().map(|r| (r - m).powi(2)).sum::<f64>() / (batches - 1) as f64;
        (var / batches as f64).sqrt()
    };
    if let Some(tol) = cfg.tol {
        if ratio_std_err > tol {
            return Err(Error::QuadratureBudgetExceeded { requested: tol, estimated: ratio_std_err, samples: cfg.samples });
        }
    }
    Ok(TensorIsometry { side: n, coeffs, coeff_norm_sqr, f_norm_sqr, ratio, ratio_std_err, samples: cfg.samples })
}
