use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::Enumeration;
use crate::ifs::{fourier_eval, IfsSystem};
use crate::linalg::ComplexMatrix;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-8;

/// Gram matrix `G[m][n] = <e_m, e_n> = mu^(n - m)` of the exponentials over a window.
#[derive(Debug, Clone)]
pub struct GramWindow {
    sys: IfsSystem,
    enumeration: Enumeration,
    tol: f64,
    indices: Vec<Vec<i64>>,
    g: ComplexMatrix,
    min_eigenvalue: f64,
    hermitian_defect: f64,
    max_tail_bound: f64,
}

/// Metadata recorded next to every serialized window.
#[derive(Debug, Clone, Serialize)]
pub struct GramMeta {
    pub system: String,
    pub enumeration: Enumeration,
    pub size: usize,
    pub tol: f64,
    pub min_eigenvalue: f64,
    pub hermitian_defect: f64,
    pub max_tail_bound: f64,
}

impl GramWindow {
    pub fn system(&self) -> &IfsSystem {
        &self.sys
    }

    pub fn enumeration(&self) -> Enumeration {
        self.enumeration
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn indices(&self) -> &[Vec<i64>] {
        &self.indices
    }

    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.g
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn meta(&self) -> GramMeta {
        GramMeta {
            system: self.sys.name().to_string(),
            enumeration: self.enumeration,
            size: self.size(),
            tol: self.tol,
            min_eigenvalue: self.min_eigenvalue,
            hermitian_defect: self.hermitian_defect,
            max_tail_bound: self.max_tail_bound,
        }
    }

    /// `mu^` at an integer frequency, with the window's truncation tolerance.
    pub fn mu_hat(&self, n: &[i64]) -> Result<Complex64> {
        let l: Vec<f64> = n.iter().map(|&v| v as f64).collect();
        Ok(fourier_eval(&self.sys, &l, self.tol)?.value)
    }
}

/// Fills the window by `fourier_eval`, one evaluation per distinct difference `n - m`.
pub fn gram_window(sys: &IfsSystem, enumeration: Enumeration, size: usize, tol: f64) -> Result<GramWindow> {
    let indices = enumeration.indices(sys.dim(), size)?;
    let mut diffs: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for m in &indices {
        for n in &indices {
            let d: Vec<i64> = n.iter().zip(m).map(|(a, b)| a - b).collect();
            let next = diffs.len();
            diffs.entry(d).or_insert(next);
        }
    }
    let keys: Vec<(&Vec<i64>, usize)> = diffs.iter().map(|(k, v)| (k, *v)).collect();
    let evaluated = keys
        .par_iter()
        .map(|(d, _)| fourier_eval(sys, &d.iter().map(|&v| v as f64).collect::<Vec<_>>(), tol))
        .collect::<Result<Vec<_>>>()?;
    let mut values = vec![Complex64::new(0.0, 0.0); keys.len()];
    let mut max_tail_bound = 0.0f64;
    for ((_, slot), v) in keys.iter().zip(&evaluated) {
        values[*slot] = v.value;
        max_tail_bound = max_tail_bound.max(v.tail_bound);
    }
    let g = ComplexMatrix::from_fn(size, size, |i, j| {
        let d: Vec<i64> = indices[j].iter().zip(&indices[i]).map(|(a, b)| a - b).collect();
        values[diffs[&d]]
    });
    let hermitian_defect = g.max_abs_diff(&g.adjoint());
    if hermitian_defect > HERMITIAN_TOL {
        return Err(Error::InvalidArgument(format!("Gram window is not Hermitian (defect {hermitian_defect})")));
    }
    let min_eigenvalue = g.hermitian_eigenvalues()?[0];
    if min_eigenvalue < -PSD_TOL {
        return Err(Error::GramNotPsd { min_eigenvalue });
    }
    Ok(GramWindow {
        sys: sys.clone(),
        enumeration,
        tol,
        indices,
        g,
        min_eigenvalue,
        hermitian_defect,
        max_tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::ifs::{chaos_sample, ChaosConfig, DEFAULT_FOURIER_TOL};

    #[test]
    fn lebesgue_window_is_the_identity() {
        let sys = IfsSystem::builtin("lebesgue-interval").unwrap();
        let w = gram_window(&sys, Enumeration::Natural1d, 32, DEFAULT_FOURIER_TOL).unwrap();
        assert!(w.matrix().max_abs_diff(&ComplexMatrix::identity(32)) < 1e-14);
    }

    #[test]
    fn bernoulli_entry_matches_monte_carlo() {
        let sys = IfsSystem::builtin("bernoulli-2-3").unwrap();
        let w = gram_window(&sys, Enumeration::Natural1d, 4, DEFAULT_FOURIER_TOL).unwrap();
        let n = 400_000;
        let cloud = chaos_sample(&sys, &ChaosConfig::new(n, 8)).unwrap();
        let mc = cloud.points().map(|x| Complex64::from_polar(1.0, 2.0 * PI * x[0])).sum::<Complex64>() / n as f64;
        assert!((w.matrix().get(0, 1) - mc).norm() <= 3.0 / (n as f64).sqrt());
        let mut prod = Complex64::new(1.0, 0.0);
        for k in 1..60 {
            prod *= Complex64::new(2.0 / 3.0, 0.0) + Complex64::from_polar(1.0 / 3.0, 2.0 * PI / 2f64.powi(k));
        }
        assert!((w.matrix().get(0, 1) - prod).norm() < 1e-14);
    }

    #[test]
    fn windows_are_hermitian_with_unit_diagonal() {
        for (name, e) in [
            ("sierpinski-gasket", Enumeration::Diagonal),
            ("sierpinski-carpet", Enumeration::SquareShell),
            ("eiffel", Enumeration::Diagonal),
            ("product-lebesgue-times-cantor", Enumeration::Lexicographic),
        ] {
            let sys = IfsSystem::builtin(name).unwrap();
            let w = gram_window(&sys, e, 40, DEFAULT_FOURIER_TOL).unwrap();
            let g = w.matrix();
            for i in 0..40 {
                assert_eq!(g.get(i, i), Complex64::new(1.0, 0.0));
                for j in 0..40 {
                    assert!((g.get(i, j) - g.get(j, i).conj()).norm() <= 1e-10);
                }
            }
            assert!(w.min_eigenvalue() >= -PSD_TOL);
        }
    }

    mod props {
        use proptest::prelude::*;

        use super::super::*;
        use crate::ifs::DEFAULT_FOURIER_TOL;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn window_is_hermitian_psd_with_unit_diagonal(p in 0.05f64..0.95, q in 0.05f64..0.95, size in 1usize..30) {
                let w = [p * q, p * (1.0 - q), 1.0 - p];
                let sys = IfsSystem::builtin("sierpinski-gasket").unwrap().with_weights(w.to_vec()).unwrap();
                let win = gram_window(&sys, Enumeration::Diagonal, size, DEFAULT_FOURIER_TOL).unwrap();
                let g = win.matrix();
                prop_assert!(g.max_abs_diff(&g.adjoint()) <= HERMITIAN_TOL);
                prop_assert!(win.min_eigenvalue() >= -PSD_TOL);
                for i in 0..size {
                    prop_assert!((g.get(i, i).re - 1.0).abs() < 1e-14);
                }
            }
        }
    }
}
