use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};

/// One Kaczmarz step: the point of the hyperplane `<a, x> = b` closest to `x_prev`,
/// `x_prev + ((b - <a, x_prev>) / |a|^2) a`.
pub fn classical_step(x_prev: &ComplexVector, a_row: &ComplexVector, b_val: Complex64) -> Result<ComplexVector> {
    a_row.check_dim(x_prev.dim())?;
    let norm_sqr = a_row.norm_sqr();
    if norm_sqr.sqrt() < 1e-14 {
        return Err(Error::ZeroRow { norm: norm_sqr.sqrt() });
    }
    let mut x = x_prev.clone();
    x.axpy((b_val - a_row.inner(x_prev)) / norm_sqr, a_row);
    Ok(x)
}

/// Iterates of cyclic sweeps over the rows, one entry per single-row step.
#[derive(Debug, Clone)]
pub struct ClassicalTrace {
    /// `x_0, x_1, ...`; `x_k` uses row `(k - 1) mod m`.
    pub iterates: Vec<ComplexVector>,
}

impl ClassicalTrace {
    pub fn last(&self) -> &ComplexVector {
        self.iterates.last().expect("trace starts with x0")
    }

    /// Distances `|x_k - x_star|`.
    pub fn errors(&self, x_star: &ComplexVector) -> Vec<f64> {
        self.iterates.iter().map(|x| x.distance(x_star)).collect()
    }

    /// Per-step defect in `|x_{k-1} - x|^2 = |x_{k-1} - x_k|^2 + |x_k - x|^2`,
    /// valid whenever `x` solves every row.
    pub fn pythagoras_defects(&self, x_star: &ComplexVector) -> Vec<f64> {
        self.iterates
            .windows(2)
            .map(|w| {
                let lhs = w[0].distance(x_star).powi(2);
                let rhs = w[0].distance(&w[1]).powi(2) + w[1].distance(x_star).powi(2);
                (lhs - rhs).abs()
            })
            .collect()
    }
}

/// Runs `sweeps` full passes over the rows of `a` (row index `k mod m`).
pub fn cyclic_sweeps(a: &ComplexMatrix, b: &ComplexVector, x0: &ComplexVector, sweeps: usize) -> Result<ClassicalTrace> {
    b.check_dim(a.rows())?;
    x0.check_dim(a.cols())?;
    let rows: Vec<ComplexVector> = (0..a.rows()).map(|i| a.row(i).iter().map(|z| z.conj()).collect::<Vec<_>>().into()).collect();
    let mut iterates = Vec::with_capacity(sweeps * rows.len() + 1);
    iterates.push(x0.clone());
    for k in 0..sweeps * rows.len() {
        let i = k % rows.len();
        // Row i of A acts as x -> sum A_ij x_j = <conj(row_i), x>.
        let next = classical_step(iterates.last().unwrap(), &rows[i], b[i])?;
        iterates.push(next);
    }
    Ok(ClassicalTrace { iterates })
}

/// The two-line system of the classical illustration:
/// `a1 = (cos pi/3, sin pi/3)`, `a2 = (cos 0.1, sin 0.1)`, `b = (1, 2)`.
pub fn fig2_system() -> (ComplexMatrix, ComplexVector) {
    let a = ComplexMatrix::from_real_rows(&[
        vec![(PI / 3.0).cos(), (PI / 3.0).sin()],
        vec![0.1f64.cos(), 0.1f64.sin()],
    ])
    .expect("2x2");
    (a, ComplexVector::from_real(&[1.0, 2.0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn projects_origin_onto_coordinate_hyperplane() {
        let x = classical_step(&ComplexVector::zeros(2), &ComplexVector::from_real(&[1.0, 0.0]), c(1.0)).unwrap();
        assert_eq!(x, ComplexVector::from_real(&[1.0, 0.0]));
    }

    #[test]
    fn point_on_hyperplane_is_fixed() {
        let a = ComplexVector::from_real(&[1.0, 2.0]);
        let x = ComplexVector::from_real(&[3.0, -1.0]);
        let y = classical_step(&x, &a, c(1.0)).unwrap();
        assert!(y.max_abs_diff(&x) < 1e-15);
    }

    #[test]
    fn zero_row_is_rejected() {
        let err = classical_step(&ComplexVector::zeros(2), &ComplexVector::zeros(2), c(1.0)).unwrap_err();
        assert!(matches!(err, Error::ZeroRow { .. }));
    }

    #[test]
    fn step_lands_on_the_hyperplane_for_complex_rows() {
        let a = ComplexVector::new(vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3)]);
        let b = Complex64::new(0.7, -1.1);
        let x = classical_step(&ComplexVector::from_real(&[0.2, 0.9]), &a, b).unwrap();
        assert!((a.inner(&x) - b).norm() < 1e-12);
    }

    /// Brute-force oracle: minimize |x - x_prev| along the line <a, x> = b in R^2.
    #[test]
    fn step_is_the_argmin_over_the_hyperplane() {
        let cases = [([1.0, 2.0], 3.0, [0.5, -4.0]), ([-0.3, 0.7], -1.0, [2.0, 2.0]), ([5.0, 0.1], 0.2, [0.0, 0.0])];
        for (a, b, p) in cases {
            let x = classical_step(&ComplexVector::from_real(&p), &ComplexVector::from_real(&a), c(b)).unwrap();
            // Parametrize the line as x0 + t d with d perpendicular to a.
            let n2 = a[0] * a[0] + a[1] * a[1];
            let x0 = [a[0] * b / n2, a[1] * b / n2];
            let d = [-a[1], a[0]];
            let dist = |t: f64| ((x0[0] + t * d[0] - p[0]).powi(2) + (x0[1] + t * d[1] - p[1]).powi(2)).sqrt();
            let mut best = (f64::INFINITY, 0.0);
            let mut t = -50.0;
            while t <= 50.0 {
                if dist(t) < best.0 {
                    best = (dist(t), t);
                }
                t += 1e-3;
            }
            // Golden-section refinement around the best grid point.
            let (mut lo, mut hi) = (best.1 - 1e-3, best.1 + 1e-3);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..200 {
                let (m1, m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
                if dist(m1) < dist(m2) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let t = 0.5 * (lo + hi);
            let oracle = [x0[0] + t * d[0], x0[1] + t * d[1]];
            // Derivative-free minimization resolves the argmin to about sqrt(eps).
            assert!((x[0].re - oracle[0]).abs() < 1e-6 && (x[1].re - oracle[1]).abs() < 1e-6);
        }
    }

    #[test]
    fn fig2_sweeps_converge_to_direct_solution() {
        let (a, b) = fig2_system();
        // Closed-form 2x2 solve by Cramer's rule.
        let (a11, a12) = ((PI / 3.0).cos(), (PI / 3.0).sin());
        let (a21, a22) = (0.1f64.cos(), 0.1f64.sin());
        let det = a11 * a22 - a12 * a21;
        let x_star = ComplexVector::from_real(&[(1.0 * a22 - a12 * 2.0) / det, (a11 * 2.0 - a21 * 1.0) / det]);
        assert!((x_star[0].re - 2.0107).abs() < 1e-4 && (x_star[1].re + 0.00615).abs() < 1e-5);

        let trace = cyclic_sweeps(&a, &b, &ComplexVector::zeros(2), 500).unwrap();
        assert!(trace.last().distance(&x_star) < 1e-8);
        assert!(trace.pythagoras_defects(&x_star).iter().all(|&d| d <= 1e-10));
        let errs = trace.errors(&x_star);
        assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}
