use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, Projection};

/// How the stored base list is extended to an index sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthPolicy {
    /// `P_0, ..., P_{m-1}`, then nothing.
    Finite,
    /// `P_{k mod m}` for every `k`.
    Cyclic,
}

/// An ordered supply `P_0, P_1, ...` of selfadjoint projections on `C^dim`.
#[derive(Debug, Clone)]
pub struct ProjectionSystem {
    base: Vec<Projection>,
    dim: usize,
    policy: LengthPolicy,
}

impl ProjectionSystem {
    pub fn new(base: Vec<Projection>, policy: LengthPolicy) -> Result<Self> {
        let dim = base
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty projection list".into()))?
            .dim();
        for p in &base {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
            }
        }
        Ok(Self { base, dim, policy })
    }

    /// Rank-one system `P_j = |e_j><e_j|`.
    pub fn from_unit_vectors(vectors: &[ComplexVector], policy: LengthPolicy, normalize: bool) -> Result<Self> {
        let base = vectors
            .iter()
            .map(|e| Projection::rank1(e, normalize))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, policy)
    }

    /// Rank-one system realizing a Gram matrix: the columns `v_n` of `G^{1/2}`
    /// satisfy `<v_m, v_n> = G[m][n]`, so they are unit vectors when `diag G = 1`.
    pub fn from_gram(gram: &ComplexMatrix, policy: LengthPolicy) -> Result<Self> {
        let root = gram.hermitian_sqrt()?;
        let vectors: Vec<_> = (0..root.cols()).map(|j| root.column(j)).collect();
        Self::from_unit_vectors(&vectors, policy, false)
    }

    /// `e_0 = (1, 0)`, `e_1 = (cos theta, sin theta)`, repeated cyclically.
    pub fn two_vector(theta: f64) -> Self {
        let e0 = ComplexVector::from_real(&[1.0, 0.0]);
        let e1 = ComplexVector::from_real(&[theta.cos(), theta.sin()]);
        Self::from_unit_vectors(&[e0, e1], LengthPolicy::Cyclic, true).expect("unit vectors")
    }

    /// Standard basis of `C^dim`, finite.
    pub fn standard_basis(dim: usize) -> Self {
        let vs: Vec<_> = (0..dim).map(|i| ComplexVector::basis(dim, i)).collect();
        Self::from_unit_vectors(&vs, LengthPolicy::Finite, false).expect("unit vectors")
    }

    /// `count` independent uniformly random unit vectors, finite.
    pub fn random_rank1<R: Rng + ?Sized>(dim: usize, count: usize, rng: &mut R) -> Self {
        let vs: Vec<_> = (0..count).map(|_| ComplexVector::random_unit(dim, rng)).collect();
        Self::from_unit_vectors(&vs, LengthPolicy::Finite, false).expect("unit vectors")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn policy(&self) -> LengthPolicy {
        self.policy
    }

    pub fn base(&self) -> &[Projection] {
        &self.base
    }

    /// Number of available steps; `None` for cyclic systems.
    pub fn len(&self) -> Option<usize> {
        match self.policy {
            LengthPolicy::Finite => Some(self.base.len()),
            LengthPolicy::Cyclic => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// `P_k`.
    pub fn get(&self, k: usize) -> Option<&Projection> {
        match self.policy {
            LengthPolicy::Finite => self.base.get(k),
            LengthPolicy::Cyclic => Some(&self.base[k % self.base.len()]),
        }
    }

    pub(crate) fn require(&self, n_max: usize) -> Result<()> {
        match self.len() {
            Some(len) if n_max >= len => Err(Error::LengthMismatch { expected: n_max + 1, found: len }),
            _ => Ok(()),
        }
    }

    /// `e_0, ..., e_n` when every projection is rank one.
    pub fn unit_vectors(&self, n: usize) -> Result<Vec<ComplexVector>> {
        self.require(n)?;
        (0..=n)
            .map(|k| {
                self.get(k)
                    .and_then(|p| p.unit_vector().cloned())
                    .ok_or_else(|| Error::InvalidArgument(format!("projection {k} is not stored as rank one")))
            })
            .collect()
    }
}
