use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::system::{LengthPolicy, ProjectionSystem};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, Projection};
use crate::mc;

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Scalar> for Complex64 {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Real(re) => Complex64::new(re, 0.0),
            Scalar::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

fn finite() -> LengthPolicy {
    LengthPolicy::Finite
}

/// JSON description of a projection system, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SystemDescriptor {
    /// `P_j = |e_j><e_j|` for the listed vectors.
    Rank1 {
        vectors: Vec<Vec<Scalar>>,
        #[serde(default)]
        normalize: bool,
        #[serde(default = "finite")]
        policy: LengthPolicy,
    },
    /// Full projection matrices, row-major nested lists.
    Projections {
        matrices: Vec<Vec<Vec<Scalar>>>,
        #[serde(default = "finite")]
        policy: LengthPolicy,
    },
    /// `count` seeded uniformly random unit vectors in `C^dim`.
    RandomRank1 { dim: usize, count: usize, seed: u64 },
    /// `(1, 0)` and `(cos theta, sin theta)`, cyclic.
    TwoVector { theta: f64 },
    /// Standard basis of `C^dim`.
    StandardBasis { dim: usize },
}

impl SystemDescriptor {
    pub fn build(&self) -> Result<ProjectionSystem> {
        match self {
            Self::Rank1 { vectors, normalize, policy } => {
                let vs: Vec<_> = vectors
                    .iter()
                    .map(|v| ComplexVector::new(v.iter().map(|&s| s.into()).collect()))
                    .collect();
                ProjectionSystem::from_unit_vectors(&vs, *policy, *normalize)
            }
            Self::Projections { matrices, policy } => {
                let base = matrices
                    .iter()
                    .map(|rows| {
                        let n = rows.len();
                        let data: Vec<Complex64> = rows.iter().flatten().map(|&s| s.into()).collect();
                        if rows.iter().any(|r| r.len() != n) {
                            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
                        }
                        Projection::from_matrix(ComplexMatrix::from_row_major(n, n, data)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                ProjectionSystem::new(base, *policy)
            }
            Self::RandomRank1 { dim, count, seed } => {
                if *dim == 0 || *count == 0 {
                    return Err(Error::InvalidArgument("dim and count must be positive".into()));
                }
                Ok(ProjectionSystem::random_rank1(*dim, *count, &mut mc::stream(*seed, 0)))
            }
            Self::TwoVector { theta } => Ok(ProjectionSystem::two_vector(*theta)),
            Self::StandardBasis { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidArgument("dim must be positive".into()));
                }
                Ok(ProjectionSystem::standard_basis(*dim))
            }
        }
    }
}
