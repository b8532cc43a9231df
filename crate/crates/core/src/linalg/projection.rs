use super::{ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

/// Operator-norm tolerance for `P = P*` and `P^2 = P`.
pub const PROJECTION_TOL: f64 = 1e-12;

/// Accepted deviation of `|e|` from 1 when building `|e><e|`.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Storage of a selfadjoint projection.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionRepr {
    /// Full matrix `P`.
    Full(ComplexMatrix),
    /// Unit vector `e`, standing for `|e><e|`.
    Rank1(ComplexVector),
}

/// A selfadjoint idempotent `P = P* = P^2` on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    repr: ProjectionRepr,
    dim: usize,
}

impl Projection {
    /// Rank-one projection `|e><e|`. With `normalize` set, any nonzero `e` is
    /// rescaled; otherwise `e` must already be a unit vector.
    pub fn rank1(e: &ComplexVector, normalize: bool) -> Result<Self> {
        let norm = e.norm();
        if norm < 1e-14 || !norm.is_finite() {
            return Err(Error::ZeroVector { norm });
        }
        if !normalize && (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            dim: e.dim(),
            repr: ProjectionRepr::Rank1(e.normalized()?),
        })
    }

    /// Validates a full matrix against the projection invariants.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let (selfadjoint, idempotent) = projection_defects(&matrix);
        if selfadjoint > PROJECTION_TOL || idempotent > PROJECTION_TOL {
            return Err(Error::NotProjection {
                selfadjoint,
                idempotent,
            });
        }
        Ok(Self {
            dim: matrix.rows(),
            repr: ProjectionRepr::Full(matrix),
        })
    }

    /// Orthogonal projection onto the span of `vectors` (modified Gram-Schmidt
    /// with one reorthogonalization pass; numerically dependent vectors are dropped).
    pub fn onto_span(dim: usize, vectors: &[ComplexVector]) -> Result<Self> {
        let mut basis: Vec<ComplexVector> = Vec::new();
        for v in vectors {
            v.check_dim(dim)?;
            let mut w = v.clone();
            for _ in 0..2 {
                for q in &basis {
                    let c = q.inner(&w);
                    w.axpy(-c, q);
                }
            }
            if w.norm() > 1e-10 * v.norm().max(1.0) {
                basis.push(w.normalized()?);
            }
        }
        let mut p = ComplexMatrix::zeros(dim, dim);
        for q in &basis {
            p = &p + &ComplexMatrix::outer(q, q);
        }
        Ok(Self {
            dim,
            repr: ProjectionRepr::Full(p),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            repr: ProjectionRepr::Full(ComplexMatrix::identity(dim)),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            repr: ProjectionRepr::Full(ComplexMatrix::zeros(dim, dim)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn repr(&self) -> &ProjectionRepr {
        &self.repr
    }

    /// The unit vector of a rank-one projection.
    pub fn unit_vector(&self) -> Option<&ComplexVector> {
        match &self.repr {
            ProjectionRepr::Rank1(e) => Some(e),
            ProjectionRepr::Full(_) => None,
        }
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        match &self.repr {
            ProjectionRepr::Full(m) => m.clone(),
            ProjectionRepr::Rank1(e) => ComplexMatrix::outer(e, e),
        }
    }

    /// `P x`
    pub fn apply(&self, x: &ComplexVector) -> ComplexVector {
        match &self.repr {
            ProjectionRepr::Full(m) => m.mul_vec(x),
            ProjectionRepr::Rank1(e) => e.scale(e.inner(x)),
        }
    }

    /// `(1 - P) x`
    pub fn apply_complement(&self, x: &ComplexVector) -> ComplexVector {
        x - &self.apply(x)
    }

    /// `P A` for a matrix `A` with `dim` rows.
    pub fn left_multiply(&self, a: &ComplexMatrix) -> ComplexMatrix {
        match &self.repr {
            ProjectionRepr::Full(m) => m * a,
            ProjectionRepr::Rank1(e) => {
                // |e><e| A = |e><A* e|
                let row = a.adjoint().mul_vec(e);
                ComplexMatrix::outer(e, &row)
            }
        }
    }

    /// `P^perp = 1 - P`.
    pub fn complement(&self) -> Projection {
        Projection {
            dim: self.dim,
            repr: ProjectionRepr::Full(&ComplexMatrix::identity(self.dim) - &self.to_matrix()),
        }
    }

    /// `(|P - P*|, |P^2 - P|)` in operator norm.
    pub fn invariant_defects(&self) -> (f64, f64) {
        projection_defects(&self.to_matrix())
    }

    /// Rank, read off as the rounded trace.
    pub fn rank(&self) -> usize {
        match &self.repr {
            ProjectionRepr::Rank1(_) => 1,
            ProjectionRepr::Full(m) => m.trace().re.round().max(0.0) as usize,
        }
    }
}

fn projection_defects(m: &ComplexMatrix) -> (f64, f64) {
    let selfadjoint = (m - &m.adjoint()).operator_norm();
    let idempotent = (&(m * m) - m).operator_norm();
    (selfadjoint, idempotent)
}

/// Builds `|e><e|`; see [`Projection::rank1`].
pub fn rank1_projection(e: &ComplexVector, normalize: bool) -> Result<Projection> {
    Projection::rank1(e, normalize)
}

/// `1 - P`.
pub fn complement(p: &Projection) -> Projection {
    p.complement()
}

/// Lattice order of projections: `P1 <= P2` iff `|P1 - P1 P2| <= tol`.
///
/// For selfadjoint projections this is equivalent to `range P1 ⊆ range P2`,
/// to `P1 = P2 P1`, and to `|P1 x| <= |P2 x|` for every `x`.
pub fn subspace_order(p1: &Projection, p2: &Projection, tol: f64) -> Result<bool> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch {
            expected: p1.dim(),
            found: p2.dim(),
        });
    }
    let a = p1.to_matrix();
    let residual = (&a - &(&a * &p2.to_matrix())).operator_norm();
    Ok(residual <= tol)
}

/// `x -> <x, P x>`, the quadratic form of a projection (real for selfadjoint `P`).
pub fn quadratic_form(p: &Projection, x: &ComplexVector) -> f64 {
    x.inner(&p.apply(x)).re
}
