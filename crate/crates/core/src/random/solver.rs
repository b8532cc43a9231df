use num_complex::Complex64;
use serde::Serialize;

use super::law::RandomProjectionLaw;
use super::products::Z99;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, Projection};
use crate::mc::{self, MeanEstimate};

/// Sampling law for `Ax = y` built from a Parseval frame `phi_j`.
#[derive(Debug, Clone)]
pub struct SamplingLaw {
    /// Rank-one atoms onto `A* phi_j` with `p_j = |A* phi_j|^2 / sum_k |A* phi_k|^2`.
    pub law: RandomProjectionLaw,
    /// The unnormalized directions `A* phi_j`.
    pub directions: Vec<ComplexVector>,
    pub frame: Vec<ComplexVector>,
    /// `|A^-1|`
    pub inverse_norm: f64,
    /// `sum_k |A* phi_k|^2`
    pub total: f64,
    /// Certified `C = 1 / (|A^-1|^2 sum_k |A* phi_k|^2)`.
    pub c_certified: f64,
}

impl SamplingLaw {
    pub fn c_inverse(&self) -> f64 {
        1.0 / self.c_certified
    }

    pub fn weights(&self) -> &[f64] {
        self.law.weights()
    }
}

/// Weights `p_j = |A* phi_j|^2 / sum_k |A* phi_k|^2` and the certified constant.
pub fn sampling_weights(a: &ComplexMatrix, frame: &[ComplexVector]) -> Result<SamplingLaw> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    a.check_invertible()?;
    let d = a.rows();
    let mut s = ComplexMatrix::zeros(d, d);
    for phi in frame {
        phi.check_dim(d)?;
        s = &s + &ComplexMatrix::outer(phi, phi);
    }
    let frame_defect = (&s - &ComplexMatrix::identity(d)).operator_norm();
    if frame_defect > 1e-10 {
        return Err(Error::InvalidArgument(format!("frame is not Parseval (|S - 1| = {frame_defect:e})")));
    }

    let adj = a.adjoint();
    let directions: Vec<ComplexVector> = frame.iter().map(|phi| adj.mul_vec(phi)).collect();
    let norms: Vec<f64> = directions.iter().map(ComplexVector::norm_sqr).collect();
    let total: f64 = norms.iter().sum();
    let inverse_norm = a.inverse()?.operator_norm();
    let lower = 1.0 / (inverse_norm * inverse_norm);
    if !(lower < total && total.is_finite()) {
        return Err(Error::Hp0Violated { lower, sum: total });
    }
    // Frame vectors with A* phi = 0 carry no weight and are left out of the law.
    let (atoms, weights): (Vec<_>, Vec<_>) = directions
        .iter()
        .zip(&norms)
        .filter(|(_, &n)| n > 0.0)
        .map(|(v, &n)| Ok((Projection::rank1(v, true)?, n / total)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let weights = renormalize(weights);
    Ok(SamplingLaw {
        law: RandomProjectionLaw::new(atoms, weights)?,
        directions,
        frame: frame.to_vec(),
        inverse_norm,
        total,
        c_certified: 1.0 / (inverse_norm * inverse_norm * total),
    })
}

fn renormalize(mut w: Vec<f64>) -> Vec<f64> {
    let s: f64 = mc::pairwise_sum(&w);
    w.iter_mut().for_each(|x| *x /= s);
    w
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSolve {
    pub x_est: ComplexVector,
    pub x_direct: ComplexVector,
    /// `|x_j - x_direct|` for `j = 0..=n_max`.
    pub trace: Vec<f64>,
    /// Frame index drawn at each step `j >= 1`.
    pub indices: Vec<usize>,
}

/// Randomized row action for `Ax = y` using only `A` and `y`:
/// `x_j = x_{j-1} + ((<phi_k, y> - <A* phi_k, x_{j-1}>) / |A* phi_k|^2) A* phi_k`
/// with `k` drawn from the sampling law at every step `j >= 1`.
pub fn solve_random(a: &ComplexMatrix, y: &ComplexVector, frame: &[ComplexVector], n_max: usize, seed: u64, x0: &ComplexVector) -> Result<RandomSolve> {
    let sl = sampling_weights(a, frame)?;
    let x_direct = a.solve(y)?;
    Ok(solve_with_law(&sl, y, n_max, &mut mc::stream(seed, 0), x0, &x_direct))
}

fn solve_with_law<R: rand::Rng + ?Sized>(sl: &SamplingLaw, y: &ComplexVector, n_max: usize, rng: &mut R, x0: &ComplexVector, x_direct: &ComplexVector) -> RandomSolve {
    // Indices into the law refer to frame vectors with nonzero direction.
    let active: Vec<usize> = (0..sl.directions.len()).filter(|&k| sl.directions[k].norm_sqr() > 0.0).collect();
    let mut x = x0.clone();
    let mut trace = Vec::with_capacity(n_max + 1);
    let mut indices = Vec::with_capacity(n_max);
    trace.push(x.distance(x_direct));
    for _ in 0..n_max {
        let k = active[sl.law.sample(rng)];
        let v = &sl.directions[k];
        let coef: Complex64 = (sl.frame[k].inner(y) - v.inner(&x)) / v.norm_sqr();
        x.axpy(coef, v);
        trace.push(x.distance(x_direct));
        indices.push(k);
    }
    RandomSolve { x_est: x, x_direct: x_direct.clone(), trace, indices }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveEnsemble {
    pub c_certified: f64,
    pub final_errors: Vec<f64>,
    pub median_final_error: f64,
    /// `E |x_j - x|^2` per step.
    pub mean_sq_error: Vec<f64>,
    pub std_err: Vec<f64>,
    /// `|x_0 - x|^2 (1 - C)^j`
    pub envelope: Vec<f64>,
    /// Median of `|x_j - x|` across seeds per step.
    pub median_error: Vec<f64>,
    /// Squared rounding floor `(1e-13 max(|x|, |x_0|, 1))^2`; steps whose
    /// envelope is below it are not compared.
    pub precision_floor: f64,
}

impl SolveEnsemble {
    pub fn within_envelope(&self) -> bool {
        self.mean_sq_error
            .iter()
            .zip(&self.std_err)
            .zip(&self.envelope)
            .take_while(|(_, &env)| env >= self.precision_floor)
            .all(|((&m, &se), &env)| m <= env || m <= env * (1.0 + Z99 * se / m))
    }

    pub fn envelope_ratio_max(&self) -> f64 {
        self.mean_sq_error
            .iter()
            .zip(&self.envelope)
            .filter(|(_, &e)| e > 0.0)
            .map(|(m, e)| m / e)
            .fold(0.0, f64::max)
    }
}

/// `trials` independent solves; trial `t` uses stream `t` of `seed`, so trial 0
/// coincides with [`solve_random`] at the same seed.
pub fn solve_ensemble(a: &ComplexMatrix, y: &ComplexVector, frame: &[ComplexVector], n_max: usize, trials: usize, seed: u64, x0: &ComplexVector) -> Result<SolveEnsemble> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let sl = sampling_weights(a, frame)?;
    let x_direct = a.solve(y)?;
    let runs: Vec<RandomSolve> = mc::map_indexed(trials, seed, |rng, _| solve_with_law(&sl, y, n_max, rng, x0, &x_direct));
    let c = sl.c_certified;
    let e0 = x0.distance(&x_direct).powi(2);
    let mut mean_sq_error = Vec::with_capacity(n_max + 1);
    let mut std_err = Vec::with_capacity(n_max + 1);
    let mut median_error = Vec::with_capacity(n_max + 1);
    for j in 0..=n_max {
        let errs: Vec<f64> = runs.iter().map(|r| r.trace[j]).collect();
        let sq: Vec<f64> = errs.iter().map(|e| e * e).collect();
        let est = MeanEstimate::from_samples(&sq);
        mean_sq_error.push(est.mean);
        std_err.push(est.std_err);
        median_error.push(mc::median(&errs));
    }
    let final_errors: Vec<f64> = runs.iter().map(|r| r.trace[n_max]).collect();
    Ok(SolveEnsemble {
        c_certified: c,
        median_final_error: mc::median(&final_errors),
        final_errors,
        mean_sq_error,
        std_err,
        envelope: (0..=n_max).map(|j| e0 * (1.0 - c).powi(j as i32)).collect(),
        median_error,
        precision_floor: (1e-13 * x_direct.norm().max(x0.norm()).max(1.0)).powi(2),
    })
}

/// Standard basis of `C^d`, the default frame.
pub fn standard_frame(d: usize) -> Vec<ComplexVector> {
    (0..d).map(|i| ComplexVector::basis(d, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kaczmarz::fig2_system;
    use crate::random::lower_bound_c;

    #[test]
    fn identity_gives_uniform_weights() {
        let sl = sampling_weights(&ComplexMatrix::identity(4), &standard_frame(4)).unwrap();
        assert!(sl.weights().iter().all(|&w| (w - 0.25).abs() < 1e-15));
        assert!((sl.c_certified - 0.25).abs() < 1e-15);
    }

    #[test]
    fn diagonal_matrix_weights_by_arithmetic() {
        let a = ComplexMatrix::diagonal(&[1.0.into(), 2.0.into()]);
        let sl = sampling_weights(&a, &standard_frame(2)).unwrap();
        assert!((sl.weights()[0] - 0.2).abs() < 1e-15 && (sl.weights()[1] - 0.8).abs() < 1e-15);
        assert!((sl.c_certified - 0.2).abs() < 1e-15);
        assert!((lower_bound_c(&sl.law).unwrap().value - sl.c_certified).abs() < 1e-12);
    }

    #[test]
    fn fig2_weights_follow_column_norms_of_adjoint() {
        let (a, _) = fig2_system();
        let sl = sampling_weights(&a, &standard_frame(2)).unwrap();
        let adj = a.adjoint();
        let norms: Vec<f64> = (0..2).map(|j| adj.column(j).norm_sqr()).collect();
        let s: f64 = norms.iter().sum();
        for j in 0..2 {
            assert!((sl.weights()[j] - norms[j] / s).abs() < 1e-15);
        }
        // Both rows are unit vectors: equal weights, and C is sigma_min^2 / 2.
        let smin = *a.singular_values().last().unwrap();
        assert!((sl.c_certified - smin * smin / 2.0).abs() < 1e-12);
        assert!((sl.c_certified - 0.2080).abs() < 1e-4);
    }

    #[test]
    fn singular_and_sandwich_failures() {
        let sing = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(sampling_weights(&sing, &standard_frame(2)), Err(Error::Singular { .. })));
        // In one dimension the sandwich is an equality, never strict.
        let one = ComplexMatrix::diagonal(&[3.0.into()]);
        assert!(matches!(sampling_weights(&one, &standard_frame(1)), Err(Error::Hp0Violated { .. })));
    }

    #[test]
    fn zero_data_stays_at_zero() {
        let (a, _) = fig2_system();
        let r = solve_random(&a, &ComplexVector::zeros(2), &standard_frame(2), 10, 1, &ComplexVector::zeros(2)).unwrap();
        assert_eq!(r.x_est, ComplexVector::zeros(2));
        assert!(r.trace.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn identity_copies_coordinates() {
        let y = ComplexVector::from_real(&[1.0, -2.0, 3.0]);
        let r = solve_random(&ComplexMatrix::identity(3), &y, &standard_frame(3), 60, 4, &ComplexVector::zeros(3)).unwrap();
        let mut seen = [false; 3];
        for (j, &k) in r.indices.iter().enumerate() {
            seen[k] = true;
            let x_j_err = r.trace[j + 1];
            if seen.iter().all(|&s| s) {
                assert_eq!(x_j_err, 0.0);
            }
        }
        assert_eq!(r.x_est, y);
    }

    #[test]
    fn fig2_random_solves_converge() {
        let (a, b) = fig2_system();
        let ens = solve_ensemble(&a, &b, &standard_frame(2), 2000, 100, 17, &ComplexVector::zeros(2)).unwrap();
        assert!(ens.median_final_error < 1e-6);
        assert!(ens.within_envelope());
        let single = solve_random(&a, &b, &standard_frame(2), 2000, 17, &ComplexVector::zeros(2)).unwrap();
        assert_eq!(single.trace[2000], ens.final_errors[0]);
    }
}
