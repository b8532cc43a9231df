use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::address::address_fold;
use crate::ifs::IfsSystem;
use crate::mc::{map_chunks, DEFAULT_CHUNK};

pub const DEFAULT_BURN_IN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    /// Each point is the address point of a fresh random word of length `burn_in`.
    Independent,
    /// Classical chaos game: one orbit per chunk, `burn_in` steps discarded.
    Chain,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChaosConfig {
    pub n_points: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub mode: SamplingMode,
    /// Number of leading address digits recorded per point.
    pub log_digits: usize,
    pub chunk: usize,
}

impl ChaosConfig {
    pub fn new(n_points: usize, seed: u64) -> Self {
        Self { n_points, burn_in: DEFAULT_BURN_IN, seed, mode: SamplingMode::Independent, log_digits: 0, chunk: DEFAULT_CHUNK }
    }

    pub fn with_log_digits(mut self, k: usize) -> Self {
        self.log_digits = k;
        self
    }

    pub fn with_mode(mut self, mode: SamplingMode) -> Self {
        self.mode = mode;
        self
    }
}

/// Flat point storage plus the logged leading digits `(i_1, ..., i_k)` of each address.
#[derive(Debug, Clone)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    log_digits: usize,
    words: Vec<u8>,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn log_digits(&self) -> usize {
        self.log_digits
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.words[i * self.log_digits..(i + 1) * self.log_digits]
    }
}

/// Samples from the invariant measure. Chunk `c` draws from stream `c` of `seed`.
pub fn chaos_sample(sys: &IfsSystem, cfg: &ChaosConfig) -> Result<PointCloud> {
    if cfg.n_points == 0 {
        return Err(Error::InvalidArgument("n_points must be at least 1".into()));
    }
    if cfg.chunk == 0 {
        return Err(Error::InvalidArgument("chunk size must be positive".into()));
    }
    let d = sys.dim();
    let k = cfg.log_digits;
    let len = cfg.burn_in.max(k).max(1);
    let parts = map_chunks(cfg.n_points, cfg.chunk, cfg.seed, |rng, range| {
        let mut coords = Vec::with_capacity(range.len() * d);
        let mut words = Vec::with_capacity(range.len() * k);
        match cfg.mode {
            SamplingMode::Independent => {
                let mut word = vec![0u8; len];
                for _ in range {
                    word.iter_mut().for_each(|w| *w = sys.sample_digit(rng) as u8);
                    coords.extend(address_fold(sys, &word));
                    words.extend_from_slice(&word[..k]);
                }
            }
            SamplingMode::Chain => {
                let mut x = vec![0.0; d];
                let mut y = vec![0.0; d];
                // history[j] is the digit applied j steps ago, i.e. i_{j+1} of the current point.
                let mut history = std::collections::VecDeque::from(vec![0u8; k]);
                let mut step = |x: &mut Vec<f64>, y: &mut Vec<f64>, history: &mut std::collections::VecDeque<u8>| {
                    let b = sys.sample_digit(rng);
                    sys.tau_into(b, x, y);
                    std::mem::swap(x, y);
                    if k > 0 {
                        history.pop_back();
                        history.push_front(b as u8);
                    }
                };
                for _ in 0..len {
                    step(&mut x, &mut y, &mut history);
                }
                for _ in range {
                    step(&mut x, &mut y, &mut history);
                    coords.extend_from_slice(&x);
                    words.extend(history.iter().copied());
                }
            }
        }
        (coords, words)
    });
    let mut coords = Vec::with_capacity(cfg.n_points * d);
    let mut words = Vec::with_capacity(cfg.n_points * k);
    for (c, w) in parts {
        coords.extend(c);
        words.extend(w);
    }
    Ok(PointCloud { dim: d, coords, log_digits: k, words })
}

/// Empirical mass of each first-level cell `tau_b(W)`, read from the logged first digit.
pub fn cell_masses(sys: &IfsSystem, cloud: &PointCloud) -> Result<Vec<f64>> {
    if cloud.log_digits() == 0 {
        return Err(Error::InvalidArgument("cell masses need at least one logged digit".into()));
    }
    let mut counts = vec![0usize; sys.digits().len()];
    for i in 0..cloud.len() {
        counts[usize::from(cloud.word(i)[0])] += 1;
    }
    Ok(counts.iter().map(|&c| c as f64 / cloud.len() as f64).collect())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    /// Samples in more than one first-level cell box.
    pub multiple: usize,
    /// Samples in no first-level cell box.
    pub none: usize,
    /// Samples whose box disagrees with the logged first digit.
    pub mislabelled: usize,
    pub samples: usize,
}

/// Geometric cell membership: `x` is in the box of `tau_b(W)` when `Mx - b` lies in the
/// attractor's bounding box (slack `tol`). Non-overlapping systems report few violations.
pub fn cell_membership(sys: &IfsSystem, cloud: &PointCloud, tol: f64) -> MembershipReport {
    let (lo, hi) = sys.bounding_box();
    let mut report = MembershipReport { samples: cloud.len(), ..Default::default() };
    for (i, x) in cloud.points().enumerate() {
        let mx = sys.m_apply(x);
        let hits: Vec<usize> = sys
            .digits()
            .iter()
            .enumerate()
            .filter(|(_, b)| (0..x.len()).all(|j| mx[j] - b[j] >= lo[j] - tol && mx[j] - b[j] <= hi[j] + tol))
            .map(|(k, _)| k)
            .collect();
        match hits.len() {
            0 => report.none += 1,
            1 => {
                if cloud.log_digits() > 0 && usize::from(cloud.word(i)[0]) != hits[0] {
                    report.mislabelled += 1;
                }
            }
            _ => report.multiple += 1,
        }
    }
    report
}
