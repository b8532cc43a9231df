//! Projection-valued Kaczmarz algorithms, their randomized variant, IFS measures
//! and Kaczmarz frames of exponentials in `L^2(mu)`.
//!
//! Inner products are conjugate-linear in the first argument throughout.

pub mod error;
pub mod frames;
pub mod ifs;
pub mod kaczmarz;
pub mod linalg;
pub mod mc;
pub mod random;

pub use error::{Error, Result};
