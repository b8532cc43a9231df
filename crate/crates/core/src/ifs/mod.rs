//! Affine iterated function systems `tau_b(x) = M^-1 (x + b)` and their invariant measures.

mod address;
mod chaos;
mod digits;
mod fourier;
mod geometry;
mod invariance;
mod markov;
mod slice;
mod system;

pub use address::{address_point, AddressPoint, AddressWord};
pub use chaos::{cell_masses, cell_membership, chaos_sample, ChaosConfig, MembershipReport, PointCloud, SamplingMode, DEFAULT_BURN_IN};
pub use digits::{digit_statistics, DigitLaw, DigitLevel, DigitReport};
pub use fourier::{fourier_eval, mask, scaling_residual, FourierValue, DEFAULT_FOURIER_TOL};
pub use geometry::{box_dimension, geometry_report, prefractal_points, removed_area, BoxCount, GeometryReport};
pub use invariance::{invariance_check, InvarianceReport, TestFunction};
pub use markov::{kakutani_affinity, perron_frobenius_check, KakutaniReport, KakutaniVerdict, PerronFrobeniusReport, TransitionMatrix};
pub use slice::{sample_slice, SliceLaw};
pub use system::{IfsDescriptor, IfsSystem, BUILTIN_NAMES};
