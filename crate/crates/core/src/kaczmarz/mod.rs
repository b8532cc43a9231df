//! Deterministic Kaczmarz recursions for sequences of projections.

mod classical;
mod descriptor;
mod duals;
mod products;
mod system;

pub use classical::{classical_step, cyclic_sweeps, fig2_system, ClassicalTrace};
pub use descriptor::{Scalar, SystemDescriptor};
pub use duals::{dilation_check, dual_consistency, dual_sequence, parseval_check, reconstruct, DilationReport, DualSequence, ParsevalReport};
pub use products::{
    default_probes, diagnose, effectiveness_test, run_products, verify_identities, DiagnosticRow, EffectiveFlag,
    EffectivenessReport, IdentityReport, IdentityRow, KaczmarzTrajectory, RunOptions, DEFAULT_RANDOM_PROBES,
};
pub use system::{LengthPolicy, ProjectionSystem};
