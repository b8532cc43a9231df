//! Randomized Kaczmarz: i.i.d. projection-valued steps and the `Ax = y` solver.

mod law;
mod products;
mod solver;

pub use law::{lower_bound_c, lower_bound_c_empirical, BoundMethod, LowerBoundC, RandomProjectionLaw};
pub use products::{
    polarization_check, run_random_products, DecayReport, DecaySummary, PolarizationReport, ProbeDecay, RandomRunConfig, Z99,
};
pub use solver::{sampling_weights, solve_ensemble, solve_random, standard_frame, RandomSolve, SamplingLaw, SolveEnsemble};
