//! Exponentials `e_n(x) = exp(i 2 pi n . x)` in `L^2(mu)` for IFS measures `mu`: Gram windows,
//! Kaczmarz duals in coefficient form, Parseval defects and Cauchy-type transforms.

mod conjecture;
mod duals;
mod enumeration;
mod functions;
mod gram;
mod tensor;

pub use conjecture::{conjecture_probe, ConjectureReport};
pub use duals::{
    cauchy_coeffs, cauchy_identity, defect_curve, embedding_check, frame_operator_two_ways, kaczmarz_duals_L2mu,
    parseval_defect_L2mu, CauchyCoefficients, CauchyIdentity, CoefficientDual, EmbeddingReport, ParsevalDefect,
};
pub use enumeration::Enumeration;
pub use functions::FunctionCoeffs;
pub use gram::{gram_window, GramMeta, GramWindow, HERMITIAN_TOL, PSD_TOL};
pub use tensor::{tensor_isometry_2d, TensorConfig, TensorIsometry};
