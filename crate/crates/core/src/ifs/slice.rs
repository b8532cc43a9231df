use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ifs::{DigitLaw, IfsDescriptor, IfsSystem};
use crate::mc::{map_chunks, DEFAULT_CHUNK};

/// Disintegration of a digit-pair measure over its `x_1` marginal: given the x digits
/// `eps_1, eps_2, ...`, the y digits are independent with law `Pr(eta_k | eps_k)`.
#[derive(Debug, Clone)]
pub struct SliceLaw {
    law: DigitLaw,
    /// `cond[e]` lists `(eta, Pr(eta | eps = e))` with positive probability.
    cond: Vec<Vec<(u32, f64)>>,
}

impl SliceLaw {
    pub fn from_ifs(sys: &IfsSystem) -> Result<Self> {
        let law = DigitLaw::from_ifs(sys)?;
        let cond = (0..law.base_x as usize)
            .map(|e| {
                (0..law.base_y as usize)
                    .filter_map(|h| law.conditional(e, h).filter(|p| *p > 0.0).map(|p| (h as u32, p)))
                    .collect()
            })
            .collect();
        Ok(Self { law, cond })
    }

    pub fn digit_law(&self) -> &DigitLaw {
        &self.law
    }

    /// The marginal measure on `x_1` as a 1D IFS.
    pub fn x_marginal(&self) -> Result<IfsSystem> {
        let support: Vec<usize> = (0..self.law.base_x as usize).filter(|&e| self.law.pr_x(e) > 0.0).collect();
        IfsSystem::new(IfsDescriptor {
            dim: 1,
            m: vec![f64::from(self.law.base_x)],
            digits: support.iter().map(|&e| vec![e as f64]).collect(),
            weights: support.iter().map(|&e| self.law.pr_x(e)).collect(),
            name: "x-marginal".into(),
        })
    }

    fn check_x(&self, x_digits: &[u32]) -> Result<()> {
        match x_digits.iter().find(|&&e| e >= self.law.base_x || self.cond[e as usize].is_empty()) {
            Some(e) => Err(Error::InvalidArgument(format!("x digit {e} has zero probability"))),
            None => Ok(()),
        }
    }

    /// `sigma^x^(t) = prod_k sum_eta Pr(eta | eps_k) exp(i 2 pi t eta / m_y^k)`.
    pub fn slice_fourier(&self, x_digits: &[u32], t: f64) -> Result<Complex64> {
        self.check_x(x_digits)?;
        Ok(self.slice_fourier_unchecked(x_digits, t))
    }

    fn slice_fourier_unchecked(&self, x_digits: &[u32], t: f64) -> Complex64 {
        let my = f64::from(self.law.base_y);
        let mut scale = 1.0;
        let mut out = Complex64::new(1.0, 0.0);
        for &e in x_digits {
            scale /= my;
            out *= self.cond[e as usize].iter().map(|(h, p)| Complex64::from_polar(*p, 2.0 * PI * t * f64::from(*h) * scale)).sum::<Complex64>();
        }
        out
    }

    /// `sigma^x^(t)` for `t = 0, 1, ..., out.len() - 1`, using powers instead of one
    /// exponential per frequency.
    pub(crate) fn slice_fourier_table(&self, x_digits: &[u32], out: &mut [Complex64]) {
        let my = f64::from(self.law.base_y);
        out.iter_mut().for_each(|v| *v = Complex64::new(1.0, 0.0));
        let mut factor = vec![Complex64::new(0.0, 0.0); out.len()];
        let mut scale = 1.0;
        for &e in x_digits {
            scale /= my;
            factor.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            for (h, p) in &self.cond[e as usize] {
                let base = Complex64::from_polar(1.0, 2.0 * PI * f64::from(*h) * scale);
                let mut pow = Complex64::new(*p, 0.0);
                for v in factor.iter_mut() {
                    *v += pow;
                    pow *= base;
                }
            }
            out.iter_mut().zip(&factor).for_each(|(o, f)| *o *= f);
        }
    }

    /// One `y` drawn from the slice over `x_digits`.
    pub fn sample_y<R: Rng + ?Sized>(&self, rng: &mut R, x_digits: &[u32]) -> f64 {
        let my = f64::from(self.law.base_y);
        let mut scale = 1.0;
        let mut y = 0.0;
        for &e in x_digits {
            scale /= my;
            let row = &self.cond[e as usize];
            let mut u: f64 = rng.random();
            let mut h = row[row.len() - 1].0;
            for (cand, p) in row {
                if u < *p {
                    h = *cand;
                    break;
                }
                u -= p;
            }
            y += f64::from(h) * scale;
        }
        y
    }

    /// Whether every digit pair of `(x, y)` up to `depth` has positive probability,
    /// reading digits by repeated multiplication with the bases.
    pub fn contains(&self, x: f64, y: f64, depth: usize) -> bool {
        let (bx, by) = (f64::from(self.law.base_x), f64::from(self.law.base_y));
        let (mut u, mut v) = (x, y);
        for _ in 0..depth {
            let (e, h) = ((u * bx).floor(), (v * by).floor());
            if e < 0.0 || h < 0.0 || e >= bx || h >= by || self.law.joint[e as usize][h as usize] == 0.0 {
                return false;
            }
            u = u * bx - e;
            v = v * by - h;
        }
        true
    }
}

/// `n` samples of `y` from the slice over the x-digit word `x_digits` (digit values).
pub fn sample_slice(law: &SliceLaw, x_digits: &[u32], n: usize, seed: u64) -> Result<Vec<f64>> {
    law.check_x(x_digits)?;
    Ok(map_chunks(n, DEFAULT_CHUNK, seed, |rng, range| range.map(|_| law.sample_y(rng, x_digits)).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gasket_slices() -> SliceLaw {
        SliceLaw::from_ifs(&IfsSystem::builtin("sierpinski-gasket").unwrap()).unwrap()
    }

    #[test]
    fn all_ones_slice_is_the_point_zero() {
        let ys = sample_slice(&gasket_slices(), &[1; 20], 1000, 1).unwrap();
        assert!(ys.iter().all(|&y| y == 0.0));
    }

    #[test]
    fn all_zeros_slice_has_fair_digits() {
        let depth = 20;
        let n = 20_000;
        let ys = sample_slice(&gasket_slices(), &vec![0; depth], n, 2).unwrap();
        let band = 3.0 * (0.25 / n as f64).sqrt();
        let mut ones = vec![0usize; depth];
        for &y in &ys {
            let mut v = y;
            for c in ones.iter_mut() {
                let d = (2.0 * v).floor();
                v = 2.0 * v - d;
                *c += d as usize;
            }
        }
        for c in ones {
            assert!((c as f64 / n as f64 - 0.5).abs() <= band);
        }
    }

    #[test]
    fn sampled_pairs_lie_in_the_gasket() {
        let law = gasket_slices();
        let x_digits: Vec<u32> = [0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 1, 1, 1, 0].to_vec();
        let x: f64 = x_digits.iter().enumerate().map(|(k, &e)| f64::from(e) * 2f64.powi(-(k as i32) - 1)).sum();
        for y in sample_slice(&law, &x_digits, 2000, 3).unwrap() {
            assert!(law.contains(x, y, x_digits.len()));
        }
        assert!(!law.contains(0.75, 0.75, 2));
    }

    #[test]
    fn slice_fourier_matches_samples() {
        let law = gasket_slices();
        let x_digits = [0u32, 0, 1, 0, 1, 0, 0, 0];
        let n = 100_000;
        let ys = sample_slice(&law, &x_digits, n, 4).unwrap();
        for t in [1.0, 2.0, 5.0] {
            let mc = ys.iter().map(|y| Complex64::from_polar(1.0, 2.0 * PI * t * y)).sum::<Complex64>() / n as f64;
            assert!((mc - law.slice_fourier(&x_digits, t).unwrap()).norm() <= 3.0 / (n as f64).sqrt());
        }
    }

    #[test]
    fn fourier_table_matches_direct_products() {
        let law = gasket_slices();
        let x_digits = [0u32, 1, 0, 0, 1, 1, 0, 0, 0, 1];
        let mut table = vec![Complex64::new(0.0, 0.0); 40];
        law.slice_fourier_table(&x_digits, &mut table);
        for (t, v) in table.iter().enumerate() {
            assert!((v - law.slice_fourier(&x_digits, t as f64).unwrap()).norm() < 1e-13);
        }
    }

    #[test]
    fn marginals() {
        let xi = gasket_slices().x_marginal().unwrap();
        assert_eq!(xi.weights(), &[2.0 / 3.0, 1.0 / 3.0]);
        let carpet = SliceLaw::from_ifs(&IfsSystem::builtin("sierpinski-carpet").unwrap()).unwrap();
        assert!(carpet.slice_fourier(&[1, 3], 1.0).is_err());
    }
}
