use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::{chaos_sample, ChaosConfig, IfsSystem, TransitionMatrix};

/// Joint law of one digit pair `(eps, eta)`: the base-`m_x` digit of `x_1` and the
/// base-`m_y` digit of `x_2` at a fixed level, for `M = diag(m_x, m_y, ...)` with integer digits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DigitLaw {
    pub base_x: u32,
    pub base_y: u32,
    /// `joint[e][h] = Pr(eps = e, eta = h)`.
    pub joint: Vec<Vec<f64>>,
    /// Digit index -> `(eps, eta)`.
    pub pairs: Vec<(u32, u32)>,
}

impl DigitLaw {
    pub fn from_ifs(sys: &IfsSystem) -> Result<Self> {
        if sys.dim() < 2 {
            return Err(Error::InvalidIfs("digit pairs need dimension at least 2".into()));
        }
        let bases = sys
            .integer_diagonal()
            .ok_or_else(|| Error::InvalidIfs("M must be diagonal with integer entries >= 2".into()))?;
        let (bx, by) = (bases[0], bases[1]);
        let mut joint = vec![vec![0.0; by as usize]; bx as usize];
        let mut pairs = Vec::with_capacity(sys.digits().len());
        for (b, p) in sys.digits().iter().zip(sys.weights()) {
            let (e, h) = (b[0], b[1]);
            let ok = |v: f64, m: u32| v.fract() == 0.0 && v >= 0.0 && v < f64::from(m);
            if !ok(e, bx) || !ok(h, by) {
                return Err(Error::InvalidIfs(format!("digit {b:?} is not a base-({bx},{by}) digit pair")));
            }
            joint[e as usize][h as usize] += p;
            pairs.push((e as u32, h as u32));
        }
        Ok(Self { base_x: bx, base_y: by, joint, pairs })
    }

    pub fn pr_x(&self, e: usize) -> f64 {
        self.joint[e].iter().sum()
    }

    pub fn pr_y(&self, h: usize) -> f64 {
        self.joint.iter().map(|row| row[h]).sum()
    }

    /// `Pr(eps = e)` for every `e`.
    pub fn x_marginal(&self) -> Vec<f64> {
        (0..self.base_x as usize).map(|e| self.pr_x(e)).collect()
    }

    /// `Pr(eta = h | eps = e)`; `None` when `Pr(eps = e) = 0`.
    pub fn conditional(&self, e: usize, h: usize) -> Option<f64> {
        let px = self.pr_x(e);
        (px > 0.0).then(|| self.joint[e][h] / px)
    }

    /// Row-stochastic `T[e][h] = Pr(eta = h | eps = e)` over the x digits of positive mass.
    /// Requires equal bases and that the x and y digits share the same support.
    pub fn transition(&self) -> Result<TransitionMatrix> {
        if self.base_x != self.base_y {
            return Err(Error::InvalidIfs(format!("bases {} and {} differ", self.base_x, self.base_y)));
        }
        let support: Vec<usize> = (0..self.base_x as usize).filter(|&e| self.pr_x(e) > 0.0).collect();
        let rows = support
            .iter()
            .map(|&e| support.iter().map(|&h| self.conditional(e, h).unwrap()).collect())
            .collect();
        let states = support.iter().map(|e| e.to_string()).collect();
        TransitionMatrix::new(rows, states)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DigitLevel {
    pub k: usize,
    /// `counts[e][h]` of samples with `(eps_k, eta_k) = (e, h)`.
    pub counts: Vec<Vec<u64>>,
    pub pr_eps0: f64,
    pub pr_eta0: f64,
    /// Empirical `Pr(eta_k = h | eps_k = e)`; `NaN` where no sample has `eps_k = e`.
    pub conditional: Vec<Vec<f64>>,
    pub marginal_pass: bool,
    pub conditional_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DigitReport {
    pub law: DigitLaw,
    pub n: usize,
    pub levels: Vec<DigitLevel>,
    /// Sample digit pairs with zero probability under the law.
    pub violations: u64,
    /// Digits where repeated multiplication by the base disagrees with the logged word.
    pub doubling_mismatches: u64,
    /// Every level's `Pr(eps_k = 0)` and `Pr(eta_k = 0)` within 3 sigma, and no violations.
    pub pass: bool,
    /// Every conditional frequency within 3 sigma of the law.
    pub conditional_pass: bool,
}

/// Empirical digit statistics of `depth` levels from `n` chaos-game samples.
/// Digits are read from the logged address words.
pub fn digit_statistics(sys: &IfsSystem, n: usize, depth: usize, seed: u64) -> Result<DigitReport> {
    let law = DigitLaw::from_ifs(sys)?;
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let cloud = chaos_sample(sys, &ChaosConfig::new(n, seed).with_log_digits(depth))?;
    let (bx, by) = (law.base_x as usize, law.base_y as usize);
    let mut counts = vec![vec![vec![0u64; by]; bx]; depth];
    let mut mismatches = 0u64;
    for i in 0..cloud.len() {
        let word = cloud.word(i);
        let x = cloud.point(i);
        let (mut u, mut v) = (x[0], x[1]);
        for (k, &b) in word.iter().enumerate() {
            let (e, h) = law.pairs[usize::from(b)];
            counts[k][e as usize][h as usize] += 1;
            let (de, dh) = ((u * bx as f64).floor(), (v * by as f64).floor());
            u = u * bx as f64 - de;
            v = v * by as f64 - dh;
            if de != f64::from(e) || dh != f64::from(h) {
                mismatches += 1;
            }
        }
    }
    let nf = n as f64;
    let band = |p: f64, m: f64| 3.0 * (p * (1.0 - p) / m).sqrt();
    let mut violations = 0;
    let levels: Vec<DigitLevel> = counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let row = |e: usize| c[e].iter().sum::<u64>() as f64;
            let col = |h: usize| c.iter().map(|r| r[h]).sum::<u64>() as f64;
            let (pr_eps0, pr_eta0) = (row(0) / nf, col(0) / nf);
            let marginal_pass = (pr_eps0 - law.pr_x(0)).abs() <= band(law.pr_x(0), nf)
                && (pr_eta0 - law.pr_y(0)).abs() <= band(law.pr_y(0), nf);
            let mut conditional_pass = true;
            let conditional = (0..bx)
                .map(|e| {
                    (0..by)
                        .map(|h| {
                            if law.joint[e][h] == 0.0 {
                                violations += c[e][h];
                            }
                            let ne = row(e);
                            if ne == 0.0 {
                                return f64::NAN;
                            }
                            let emp = c[e][h] as f64 / ne;
                            if let Some(p) = law.conditional(e, h) {
                                conditional_pass &= (emp - p).abs() <= band(p, ne);
                            }
                            emp
                        })
                        .collect()
                })
                .collect();
            DigitLevel { k: k + 1, counts: c, pr_eps0, pr_eta0, conditional, marginal_pass, conditional_pass }
        })
        .collect();
    let pass = violations == 0 && levels.iter().all(|l| l.marginal_pass);
    let conditional_pass = levels.iter().all(|l| l.conditional_pass);
    Ok(DigitReport { law, n, levels, violations, doubling_mismatches: mismatches, pass, conditional_pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gasket_law_table() {
        let law = DigitLaw::from_ifs(&IfsSystem::builtin("sierpinski-gasket").unwrap()).unwrap();
        assert!((law.pr_x(0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((law.pr_y(0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((law.conditional(0, 0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(law.conditional(1, 0), Some(1.0));
        assert_eq!(law.conditional(1, 1), Some(0.0));
    }

    #[test]
    fn eiffel_and_carpet_transitions() {
        let t = DigitLaw::from_ifs(&IfsSystem::builtin("eiffel").unwrap()).unwrap().transition().unwrap();
        let expect = [[2.0 / 3.0, 1.0 / 3.0], [1.0, 0.0]];
        for e in 0..2 {
            for h in 0..2 {
                assert!((t.rows()[e][h] - expect[e][h]).abs() < 1e-15);
            }
        }
        let carpet = DigitLaw::from_ifs(&IfsSystem::builtin("sierpinski-carpet").unwrap()).unwrap();
        assert_eq!(carpet.x_marginal(), vec![0.375, 0.25, 0.375]);
        assert_eq!(carpet.conditional(1, 1), Some(0.0));
    }

    #[test]
    fn product_measure_has_no_square_transition() {
        let law = DigitLaw::from_ifs(&IfsSystem::builtin("product-lebesgue-times-cantor").unwrap()).unwrap();
        assert_eq!(law.x_marginal(), vec![0.5, 0.5]);
        assert!(law.transition().is_err());
    }

    #[test]
    fn gasket_digit_statistics() {
        let sys = IfsSystem::builtin("sierpinski-gasket").unwrap();
        let r = digit_statistics(&sys, 200_000, 12, 2024).unwrap();
        assert!(r.pass, "{:?}", r.levels.iter().map(|l| (l.pr_eps0, l.pr_eta0)).collect::<Vec<_>>());
        assert_eq!(r.violations, 0);
        for l in &r.levels {
            assert_eq!(l.conditional[1][0], 1.0);
        }
        assert!(r.doubling_mismatches <= 10);
    }

    #[test]
    fn one_dimensional_systems_are_rejected() {
        assert!(DigitLaw::from_ifs(&IfsSystem::builtin("lebesgue-interval").unwrap()).is_err());
    }
}
