use serde::Serialize;

use super::products::{default_probes, operator_products};
use super::system::ProjectionSystem;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, NORMALIZATION_TOL};

/// Dual vectors `g_n` with `Q_n = |e_n><g_n|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSequence {
    pub g: Vec<ComplexVector>,
}

impl DualSequence {
    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.g.first().map_or(0, ComplexVector::dim)
    }

    /// Coefficients `<g_j, x>`.
    pub fn coefficients(&self, x: &ComplexVector) -> Vec<num_complex::Complex64> {
        self.g.iter().map(|g| g.inner(x)).collect()
    }

    /// Frame operator `S = sum |g_j><g_j|`.
    pub fn frame_operator(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut s = ComplexMatrix::zeros(d, d);
        for g in &self.g {
            s = &s + &ComplexMatrix::outer(g, g);
        }
        s
    }

    /// `|S - 1|`, the operator form of the Parseval defect.
    pub fn frame_operator_defect(&self) -> f64 {
        (&self.frame_operator() - &ComplexMatrix::identity(self.dim())).operator_norm()
    }
}

/// `g_0 = e_0`, `g_n = e_n - sum_{j<n} <e_j, e_n> g_j`.
///
/// Linearly dependent `e_n` give `g_n = 0`, which is kept as is.
pub fn dual_sequence(e: &[ComplexVector]) -> Result<DualSequence> {
    let Some(first) = e.first() else {
        return Ok(DualSequence { g: Vec::new() });
    };
    let dim = first.dim();
    for v in e {
        v.check_dim(dim)?;
        let norm = v.norm();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
    }
    let mut g: Vec<ComplexVector> = Vec::with_capacity(e.len());
    for (n, en) in e.iter().enumerate() {
        let mut gn = en.clone();
        for j in 0..n {
            gn.axpy(-e[j].inner(en), &g[j]);
        }
        g.push(gn);
    }
    Ok(DualSequence { g })
}

/// `max_n |Q_n - |e_n><g_n||` against independently built products.
pub fn dual_consistency(sys: &ProjectionSystem, duals: &DualSequence) -> Result<f64> {
    if duals.is_empty() {
        return Ok(0.0);
    }
    let n_max = duals.len() - 1;
    let e = sys.unit_vectors(n_max)?;
    let (_, qs) = operator_products(sys, n_max);
    Ok(qs
        .iter()
        .zip(e.iter().zip(&duals.g))
        .map(|(q, (en, gn))| (q - &ComplexMatrix::outer(en, gn)).operator_norm())
        .fold(0.0, f64::max))
}

/// `sum_{j<=N} <g_j, x> e_j`.
pub fn reconstruct(x: &ComplexVector, duals: &DualSequence, e: &[ComplexVector]) -> Result<ComplexVector> {
    if duals.len() != e.len() {
        return Err(Error::LengthMismatch { expected: e.len(), found: duals.len() });
    }
    let mut out = ComplexVector::zeros(x.dim());
    for (g, en) in duals.g.iter().zip(e) {
        g.check_dim(x.dim())?;
        out.axpy(g.inner(x), en);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParsevalReport {
    /// `max |sum_j |<g_j, x>|^2 - |x|^2| / |x|^2` over the probes.
    pub max_defect: f64,
    pub pass: bool,
    pub tol: f64,
    pub probes: usize,
}

/// Parseval defect of the duals over `probes` seeded random unit vectors
/// plus the standard basis.
pub fn parseval_check(duals: &DualSequence, probes: usize, tol: f64, seed: u64) -> ParsevalReport {
    let panel = default_probes(duals.dim(), probes, seed);
    let max_defect = panel
        .iter()
        .map(|x| {
            let energy: f64 = duals.g.iter().map(|g| g.inner(x).norm_sqr()).sum();
            (energy - x.norm_sqr()).abs() / x.norm_sqr()
        })
        .fold(0.0, f64::max);
    ParsevalReport {
        max_defect,
        pass: max_defect <= tol,
        tol,
        probes: panel.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilationReport {
    /// `max_j |Q_j* Q_j - V* E_j V|`.
    pub component_residual: f64,
    /// `|V* V - 1|`.
    pub isometry_defect: f64,
    /// `|sum_j Q_j* Q_j - 1|`, computed without `V`.
    pub frame_defect: f64,
    pub pass: bool,
}

/// Builds `V x = (Q_0 x, ..., Q_N x)` as an `(N+1)d x d` matrix together with
/// the coordinate projections `E_j`, and compares `V* E_j V` with `Q_j* Q_j`.
pub fn dilation_check(sys: &ProjectionSystem, n_max: usize) -> Result<DilationReport> {
    sys.require(n_max)?;
    let d = sys.dim();
    let (_, qs) = operator_products(sys, n_max);
    let blocks = qs.len();
    let v = ComplexMatrix::from_fn(blocks * d, d, |r, c| qs[r / d].get(r % d, c));
    let v_adj = v.adjoint();

    let mut component_residual: f64 = 0.0;
    let mut frame = ComplexMatrix::zeros(d, d);
    for (j, q) in qs.iter().enumerate() {
        // E_j keeps the rows of block j.
        let ejv = ComplexMatrix::from_fn(blocks * d, d, |r, c| if r / d == j { v.get(r, c) } else { num_complex::Complex64::new(0.0, 0.0) });
        let qq = &q.adjoint() * q;
        component_residual = component_residual.max((&(&v_adj * &ejv) - &qq).operator_norm());
        frame = &frame + &qq;
    }
    let id = ComplexMatrix::identity(d);
    let isometry_defect = (&(&v_adj * &v) - &id).operator_norm();
    let frame_defect = (&frame - &id).operator_norm();
    Ok(DilationReport {
        component_residual,
        isometry_defect,
        frame_defect,
        pass: component_residual <= 1e-11 && (isometry_defect - frame_defect).abs() <= 1e-12,
    })
}
