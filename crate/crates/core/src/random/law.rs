use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, Projection};
use crate::mc;

/// Law of a projection-valued random variable: `P(xi = P_j) = p_j`.
#[derive(Debug, Clone)]
pub struct RandomProjectionLaw {
    atoms: Vec<Projection>,
    weights: Vec<f64>,
    sampler: WeightedIndex<f64>,
}

impl RandomProjectionLaw {
    pub fn new(atoms: Vec<Projection>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidArgument("law needs at least one atom".into()));
        }
        if atoms.len() != weights.len() {
            return Err(Error::LengthMismatch { expected: atoms.len(), found: weights.len() });
        }
        let dim = atoms[0].dim();
        if let Some(p) = atoms.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidProbability(format!("weight {w} is not positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbability(format!("weights sum to {total}")));
        }
        let sampler = WeightedIndex::new(&weights).map_err(|e| Error::InvalidProbability(e.to_string()))?;
        Ok(Self { atoms, weights, sampler })
    }

    /// Uniform weights over rank-one atoms `|e_j><e_j|` (vectors are normalized).
    pub fn uniform_rank1(vectors: &[ComplexVector]) -> Result<Self> {
        let atoms = vectors.iter().map(|e| Projection::rank1(e, true)).collect::<Result<Vec<_>>>()?;
        let n = atoms.len();
        Self::new(atoms, vec![1.0 / n as f64; n])
    }

    pub fn atoms(&self) -> &[Projection] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    /// Index of a random atom.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sampler.sample(rng)
    }

    /// `E[xi] = sum p_j P_j`.
    pub fn mean_operator(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for (p, &w) in self.atoms.iter().zip(&self.weights) {
            m = &m + &p.to_matrix().scale(w.into());
        }
        m
    }

    /// `E |xi y|^2 = sum p_j |P_j y|^2`.
    pub fn expected_energy(&self, y: &ComplexVector) -> f64 {
        self.atoms.iter().zip(&self.weights).map(|(p, w)| w * p.apply(y).norm_sqr()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    ExactEigen,
    Empirical,
}

/// Constant `C` in `E |xi x|^2 >= C |x|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBoundC {
    pub value: f64,
    pub method: BoundMethod,
}

/// Smallest eigenvalue of `sum p_j P_j`.
pub fn lower_bound_c(law: &RandomProjectionLaw) -> Result<LowerBoundC> {
    let min = law.mean_operator().hermitian_eigenvalues()?[0];
    if min < 1e-12 {
        return Err(Error::NotUniform { min_eigenvalue: min });
    }
    Ok(LowerBoundC { value: min.min(1.0), method: BoundMethod::ExactEigen })
}

/// `min_x sum p_j |P_j x|^2` over seeded random unit probes. This overestimates
/// the exact constant; it exists to cross-check the eigen-solve.
pub fn lower_bound_c_empirical(law: &RandomProjectionLaw, probes: usize, seed: u64) -> Result<LowerBoundC> {
    let mut rng = mc::stream(seed, 0);
    let min = (0..probes.max(1))
        .map(|_| law.expected_energy(&ComplexVector::random_unit(law.dim(), &mut rng)))
        .fold(f64::INFINITY, f64::min);
    if min < 1e-12 {
        return Err(Error::NotUniform { min_eigenvalue: min });
    }
    Ok(LowerBoundC { value: min.min(1.0), method: BoundMethod::Empirical })
}
