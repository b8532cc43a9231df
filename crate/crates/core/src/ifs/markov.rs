use serde::Serialize;

use crate::error::{Error, Result};

const STOCHASTIC_TOL: f64 = 1e-12;

/// Row-stochastic matrix with state labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionMatrix {
    rows: Vec<Vec<f64>>,
    states: Vec<String>,
}

fn check_probability_vector(v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::InvalidProbability(format!("{v:?} has a negative entry")));
    }
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() > STOCHASTIC_TOL {
        return Err(Error::InvalidProbability(format!("{v:?} sums to {s}")));
    }
    Ok(())
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<f64>>, states: Vec<String>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || states.len() != n {
            return Err(Error::NotStochastic(format!("{n} rows for {} states", states.len())));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotStochastic(format!("row {i} has length {}", r.len())));
            }
            check_probability_vector(r).map_err(|_| Error::NotStochastic(format!("row {i} = {r:?}")))?;
        }
        Ok(Self { rows, states })
    }

    /// States labelled `0, 1, ...`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let states = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::new(rows, states)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Row vector times matrix, `vT`.
    pub fn left_apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.size()).map(|j| v.iter().zip(&self.rows).map(|(a, r)| a * r[j]).sum()).collect()
    }

    /// Stationary row vector by lazy power iteration `v <- v (1 + T) / 2` from the uniform vector.
    /// Returns the vector and the number of iterations used.
    pub fn stationary(&self, tol: f64, max_iter: usize) -> (Vec<f64>, usize) {
        let n = self.size();
        let mut v = vec![1.0 / n as f64; n];
        for it in 1..=max_iter {
            let vt = self.left_apply(&v);
            let next: Vec<f64> = v.iter().zip(&vt).map(|(a, b)| 0.5 * (a + b)).collect();
            let change = sup_diff(&next, &v);
            v = next;
            if change < tol {
                return (v, it);
            }
        }
        (v, max_iter)
    }
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct PerronFrobeniusReport {
    /// `|vT - v|_inf` for the supplied `v`.
    pub defect: f64,
    pub stationary: Vec<f64>,
    pub stationary_defect: f64,
    /// `|v - stationary|_inf`; only meaningful when the stationary vector is unique.
    pub distance: f64,
    pub iterations: usize,
}

pub fn perron_frobenius_check(t: &TransitionMatrix, v: &[f64]) -> Result<PerronFrobeniusReport> {
    if v.len() != t.size() {
        return Err(Error::DimensionMismatch { expected: t.size(), found: v.len() });
    }
    check_probability_vector(v)?;
    let defect = sup_diff(&t.left_apply(v), v);
    let (stationary, iterations) = t.stationary(1e-15, 100_000);
    let stationary_defect = sup_diff(&t.left_apply(&stationary), &stationary);
    let distance = sup_diff(v, &stationary);
    Ok(PerronFrobeniusReport { defect, stationary, stationary_defect, distance, iterations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KakutaniVerdict {
    MutuallySingular,
    Equivalent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KakutaniReport {
    pub rho: f64,
    pub verdict: KakutaniVerdict,
}

/// Hellinger affinity `rho = sum_b sqrt(p_b p'_b)` of one coordinate of two infinite
/// product measures; the products are mutually singular iff `rho < 1`.
pub fn kakutani_affinity(p: &[f64], q: &[f64]) -> Result<KakutaniReport> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    check_probability_vector(p)?;
    check_probability_vector(q)?;
    let rho = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum::<f64>();
    let verdict = if rho < 1.0 - 1e-12 { KakutaniVerdict::MutuallySingular } else { KakutaniVerdict::Equivalent };
    Ok(KakutaniReport { rho, verdict })
}
