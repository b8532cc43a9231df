//! Dense complex linear algebra on `C^d` and selfadjoint projections.

mod matrix;
mod projection;
mod vector;

pub use matrix::ComplexMatrix;
pub use projection::{
    complement, quadratic_form, rank1_projection, subspace_order, Projection, ProjectionRepr,
    NORMALIZATION_TOL, PROJECTION_TOL,
};
pub use vector::ComplexVector;
