//! Seeded streams and order-independent reductions.
//!
//! Work is split into fixed-size chunks; chunk `c` draws from stream `c` of a
//! ChaCha8 generator keyed by the master seed. Chunk results are collected in
//! chunk order and reduced by pairwise summation over a fixed tree, so outputs
//! depend only on (seed, size, chunk size) and never on the worker count.

use std::ops::Range;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const DEFAULT_CHUNK: usize = 4096;

/// Stream `index` of the generator keyed by `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Splits `0..n` into chunks of `chunk` items and maps them in parallel.
/// Chunk `c` receives `stream(seed, c)`; results come back in chunk order.
pub fn map_chunks<T, F>(n: usize, chunk: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, Range<usize>) -> T + Sync,
{
    let chunk = chunk.max(1);
    let count = n.div_ceil(chunk);
    (0..count)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, c as u64);
            let start = c * chunk;
            f(&mut rng, start..(start + chunk).min(n))
        })
        .collect()
}

/// Maps every index in parallel with its own stream; results in index order.
pub fn map_indexed<T, F>(n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| f(&mut stream(seed, i as u64), i))
        .collect()
}

/// Pairwise summation with a tree fixed by the length alone.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub n: usize,
}

impl MeanEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self { mean: f64::NAN, std_err: f64::NAN, n };
        }
        let mean = pairwise_sum(xs) / n as f64;
        let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
        let var = if n > 1 { pairwise_sum(&dev) / (n - 1) as f64 } else { 0.0 };
        Self {
            mean,
            std_err: (var / n as f64).sqrt(),
            n,
        }
    }
}

/// Mean of complex samples; the error is `sqrt((var Re + var Im) / n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMeanEstimate {
    pub mean: Complex64,
    pub std_err: f64,
    pub n: usize,
}

impl ComplexMeanEstimate {
    pub fn from_samples(zs: &[Complex64]) -> Self {
        let re: Vec<f64> = zs.iter().map(|z| z.re).collect();
        let im: Vec<f64> = zs.iter().map(|z| z.im).collect();
        let (a, b) = (MeanEstimate::from_samples(&re), MeanEstimate::from_samples(&im));
        Self {
            mean: Complex64::new(a.mean, b.mean),
            std_err: a.std_err.hypot(b.std_err),
            n: zs.len(),
        }
    }
}

/// Median of a slice (NaNs sort last).
pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn chunk_results_do_not_depend_on_pool_size() {
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                let sums = map_chunks(10_000, 333, 42, |rng, range| {
                    let xs: Vec<f64> = range.map(|_| rng.random::<f64>()).collect();
                    pairwise_sum(&xs)
                });
                pairwise_sum(&sums)
            })
        };
        assert_eq!(run(1).to_bits(), run(4).to_bits());
    }

    #[test]
    fn streams_differ_by_index() {
        let a: u64 = stream(1, 0).random();
        let b: u64 = stream(1, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, stream(1, 0).random::<u64>());
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
    }

    #[test]
    fn mean_estimate_of_constant_has_zero_error() {
        let e = MeanEstimate::from_samples(&[2.0; 10]);
        assert_eq!(e.mean, 2.0);
        assert_eq!(e.std_err, 0.0);
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
