use nalgebra::DMatrix;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// JSON form of an affine IFS `tau_b(x) = M^-1 (x + b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IfsDescriptor {
    pub dim: usize,
    /// Row-major `dim x dim`.
    #[serde(rename = "M")]
    pub m: Vec<f64>,
    pub digits: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    #[serde(default)]
    pub name: String,
}

pub const BUILTIN_NAMES: [&str; 6] = [
    "sierpinski-gasket",
    "sierpinski-carpet",
    "eiffel",
    "product-lebesgue-times-cantor",
    "lebesgue-interval",
    "bernoulli-2-3",
];

/// Affine IFS with expansive `M`, digit set `B` and weights `p`.
#[derive(Debug, Clone)]
pub struct IfsSystem {
    name: String,
    dim: usize,
    m: Vec<f64>,
    m_inv: Vec<f64>,
    digits: Vec<Vec<f64>>,
    weights: Vec<f64>,
    /// `M^-1 b` per digit.
    shifts: Vec<Vec<f64>>,
    contraction: f64,
    sampler: WeightedIndex<f64>,
}

fn diag(d: usize, v: f64) -> Vec<f64> {
    let mut m = vec![0.0; d * d];
    (0..d).for_each(|i| m[i * d + i] = v);
    m
}

impl IfsSystem {
    pub fn new(desc: IfsDescriptor) -> Result<Self> {
        let IfsDescriptor { dim, m, digits, weights, name } = desc;
        if dim == 0 {
            return Err(Error::InvalidIfs("dimension must be positive".into()));
        }
        if m.len() != dim * dim {
            return Err(Error::InvalidIfs(format!("M has {} entries, expected {}", m.len(), dim * dim)));
        }
        if digits.len() < 2 || digits.len() > 256 {
            return Err(Error::InvalidIfs(format!("need between 2 and 256 digits, got {}", digits.len())));
        }
        if let Some(b) = digits.iter().find(|b| b.len() != dim) {
            return Err(Error::InvalidIfs(format!("digit {b:?} has wrong dimension")));
        }
        if weights.len() != digits.len() {
            return Err(Error::InvalidIfs(format!("{} weights for {} digits", weights.len(), digits.len())));
        }
        if m.iter().chain(digits.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidIfs("non-finite entry".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidProbability(format!("weight {w} is negative")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbability(format!("weights sum to {total}")));
        }

        let mat = DMatrix::from_row_slice(dim, dim, &m);
        let min_modulus = mat
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min);
        if min_modulus <= 1.0 {
            return Err(Error::InvalidIfs(format!("M is not expansive (smallest |eigenvalue| {min_modulus})")));
        }
        let inv = mat
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidIfs("M is singular".into()))?;
        let contraction = inv.singular_values().max();
        if contraction >= 1.0 {
            return Err(Error::InvalidIfs(format!("|M^-1| = {contraction} is not a contraction")));
        }
        let m_inv: Vec<f64> = (0..dim * dim).map(|k| inv[(k / dim, k % dim)]).collect();
        let shifts = digits.iter().map(|b| mat_vec(&m_inv, dim, b)).collect();
        let sampler = WeightedIndex::new(&weights).map_err(|e| Error::InvalidProbability(e.to_string()))?;
        Ok(Self { name, dim, m, m_inv, digits, weights, shifts, contraction, sampler })
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let (dim, m, digits, weights): (usize, Vec<f64>, Vec<Vec<f64>>, Vec<f64>) = match name {
            "sierpinski-gasket" => (2, diag(2, 2.0), vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0 / 3.0; 3]),
            "sierpinski-carpet" => {
                let digits: Vec<Vec<f64>> = (0..9)
                    .filter(|&k| k != 4)
                    .map(|k| vec![(k % 3) as f64, (k / 3) as f64])
                    .collect();
                (2, diag(2, 3.0), digits, vec![0.125; 8])
            }
            "eiffel" => (
                3,
                diag(3, 2.0),
                vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
                vec![0.25; 4],
            ),
            "product-lebesgue-times-cantor" => (
                2,
                vec![2.0, 0.0, 0.0, 3.0],
                vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0], vec![1.0, 2.0]],
                vec![0.25; 4],
            ),
            "lebesgue-interval" => (1, vec![2.0], vec![vec![0.0], vec![1.0]], vec![0.5, 0.5]),
            "bernoulli-2-3" => (1, vec![2.0], vec![vec![0.0], vec![1.0]], vec![2.0 / 3.0, 1.0 / 3.0]),
            other => return Err(Error::InvalidArgument(format!("unknown built-in system {other:?}"))),
        };
        Self::new(IfsDescriptor { dim, m, digits, weights, name: name.to_string() })
    }

    pub fn descriptor(&self) -> IfsDescriptor {
        IfsDescriptor {
            dim: self.dim,
            m: self.m.clone(),
            digits: self.digits.clone(),
            weights: self.weights.clone(),
            name: self.name.clone(),
        }
    }

    /// Same maps with new weights.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        Self::new(IfsDescriptor { weights, ..self.descriptor() })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> &[f64] {
        &self.m
    }

    pub fn m_inv(&self) -> &[f64] {
        &self.m_inv
    }

    pub fn digits(&self) -> &[Vec<f64>] {
        &self.digits
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `M^-1 b` for each digit.
    pub fn shifts(&self) -> &[Vec<f64>] {
        &self.shifts
    }

    /// `|M^-1|` in operator norm.
    pub fn contraction(&self) -> f64 {
        self.contraction
    }

    /// Bound on `|x|` for `x` in the attractor: `c / (1 - c) max |b|`.
    pub fn radius(&self) -> f64 {
        let c = self.contraction;
        let bmax = self.digits.iter().map(|b| norm2(b)).fold(0.0, f64::max);
        c / (1.0 - c) * bmax
    }

    pub fn sample_digit<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sampler.sample(rng)
    }

    /// `tau_b(x) = M^-1 x + M^-1 b`, written into `out`.
    pub fn tau_into(&self, b: usize, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        for i in 0..d {
            let mut s = self.shifts[b][i];
            for j in 0..d {
                s += self.m_inv[i * d + j] * x[j];
            }
            out[i] = s;
        }
    }

    pub fn tau(&self, b: usize, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.tau_into(b, x, &mut out);
        out
    }

    /// `M x`
    pub fn m_apply(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.m, self.dim, x)
    }

    /// `M^-t lambda`
    pub fn m_inv_t_apply(&self, lambda: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d).map(|i| (0..d).map(|j| self.m_inv[j * d + i] * lambda[j]).sum()).collect()
    }

    /// Diagonal integer bases `m_i` when `M = diag(m_1, ..., m_d)` with integers `m_i >= 2`.
    pub fn integer_diagonal(&self) -> Option<Vec<u32>> {
        let d = self.dim;
        let mut bases = Vec::with_capacity(d);
        for i in 0..d {
            for j in 0..d {
                if i != j && self.m[i * d + j] != 0.0 {
                    return None;
                }
            }
            let v = self.m[i * d + i];
            if v.fract() != 0.0 || v < 2.0 {
                return None;
            }
            bases.push(v as u32);
        }
        Some(bases)
    }

    /// Axis-aligned box containing the attractor, from iterating `box -> hull(U tau_b(box))`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.dim;
        let r = self.radius();
        let (mut lo, mut hi) = (vec![-r; d], vec![r; d]);
        for _ in 0..200 {
            let mut nlo = vec![f64::INFINITY; d];
            let mut nhi = vec![f64::NEG_INFINITY; d];
            for b in 0..self.digits.len() {
                for corner in 0..(1usize << d) {
                    let x: Vec<f64> = (0..d).map(|i| if corner >> i & 1 == 1 { hi[i] } else { lo[i] }).collect();
                    let y = self.tau(b, &x);
                    for i in 0..d {
                        nlo[i] = nlo[i].min(y[i]);
                        nhi[i] = nhi[i].max(y[i]);
                    }
                }
            }
            let change = (0..d).map(|i| (nlo[i] - lo[i]).abs().max((nhi[i] - hi[i]).abs())).fold(0.0, f64::max);
            lo = nlo;
            hi = nhi;
            if change < 1e-15 {
                break;
            }
        }
        (lo, hi)
    }
}

pub(crate) fn mat_vec(m: &[f64], d: usize, x: &[f64]) -> Vec<f64> {
    (0..d).map(|i| (0..d).map(|j| m[i * d + j] * x[j]).sum()).collect()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
