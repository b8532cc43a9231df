use serde::Serialize;

use super::law::{lower_bound_c, RandomProjectionLaw};
use crate::error::{Error, Result};
use crate::linalg::ComplexVector;
use crate::mc::{self, MeanEstimate};

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.576;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomRunConfig {
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
    /// Draw `xi_0` from the law instead of fixing `xi_0 = P_0` (a deviation
    /// from the theorem's setup, off by default).
    pub randomize_first: bool,
}

/// Decay of `E |T_n x|^2` for one probe.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeDecay {
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
    /// `E |T_0 x|^2 (1 - C)^n`.
    pub envelope: Vec<f64>,
    /// Mean of `|x - sum_{j<=n} Q_j x|^2`, accumulated from the `Q_j` separately.
    pub resolution_mean: Vec<f64>,
    pub resolution_std_err: Vec<f64>,
    /// Per-trial energies `|T_n x|^2`, `[trial][n]`.
    pub traces: Vec<Vec<f64>>,
}

impl ProbeDecay {
    /// Whether `mean <= envelope (1 + h / mean)` at every step, `h` the 99% half-width.
    pub fn within_envelope(&self) -> bool {
        self.mean.iter().zip(&self.std_err).zip(&self.envelope).all(|((&m, &se), &env)| {
            // At n = 0 mean and envelope are the same number summed two ways.
            let env = env * (1.0 + 4.0 * f64::EPSILON);
            if m <= env {
                return true;
            }
            m <= env * (1.0 + Z99 * se / m)
        })
    }

    /// `mean |x - sum Q_j x|^2 <= envelope + 3 se` at every step.
    pub fn resolution_within_envelope(&self) -> bool {
        self.resolution_mean
            .iter()
            .zip(&self.resolution_std_err)
            .zip(&self.envelope)
            .all(|((&m, &se), &env)| m <= env + 3.0 * se + 1e-15)
    }

    pub fn envelope_ratio_max(&self) -> f64 {
        self.mean
            .iter()
            .zip(&self.envelope)
            .filter(|(_, &e)| e > 0.0)
            .map(|(m, e)| m / e)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub c: f64,
    pub config: RandomRunConfig,
    pub probes: Vec<ProbeDecay>,
    /// Largest pathwise defect in `|T_n x|^2 = |T_{n-1} x|^2 - |xi_n T_{n-1} x|^2`, relative to `|x|^2`.
    pub max_split_defect: f64,
    /// Largest `sum_j p_j |(1 - P_j) y|^2 - (1 - C) |y|^2` over trajectory prefixes `y = T_{n-1} x`, relative to `|x|^2`.
    pub max_contraction_excess: f64,
}

impl DecayReport {
    pub fn envelope_ratio_max(&self) -> f64 {
        self.probes.iter().map(ProbeDecay::envelope_ratio_max).fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.probes.iter().all(ProbeDecay::within_envelope)
            && self.max_split_defect <= 1e-12
            && self.max_contraction_excess <= 1e-12
    }

    pub fn summary(&self) -> DecaySummary {
        DecaySummary {
            c: self.c,
            envelope_ratio_max: self.envelope_ratio_max(),
            pass: self.pass(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecaySummary {
    #[serde(rename = "C")]
    pub c: f64,
    pub envelope_ratio_max: f64,
    pub pass: bool,
}

struct TrialPath {
    /// `[probe][n]`
    energy: Vec<Vec<f64>>,
    resolution: Vec<Vec<f64>>,
    split_defect: f64,
    contraction_excess: f64,
}

/// Random products `T_n = (1 - xi_n) ... (1 - xi_0)` with `xi_k` i.i.d. from the
/// law for `k >= 1` and `xi_0 = P_0` (the first atom) unless randomized.
///
/// Trial `t` draws from stream `t` of the master seed, and per-step means are
/// pairwise sums in trial order, so the report is independent of scheduling.
pub fn run_random_products(law: &RandomProjectionLaw, cfg: RandomRunConfig, probes: &[ComplexVector]) -> Result<DecayReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if probes.is_empty() {
        return Err(Error::InvalidArgument("at least one probe vector is required".into()));
    }
    for x in probes {
        x.check_dim(law.dim())?;
    }
    let c = lower_bound_c(law)?.value;

    let paths: Vec<TrialPath> = mc::map_indexed(cfg.trials, cfg.seed, |rng, _| {
        let first = if cfg.randomize_first { law.sample(rng) } else { 0 };
        let steps: Vec<usize> = std::iter::once(first).chain((0..cfg.n_max).map(|_| law.sample(rng))).collect();
        let mut path = TrialPath {
            energy: Vec::with_capacity(probes.len()),
            resolution: Vec::with_capacity(probes.len()),
            split_defect: 0.0,
            contraction_excess: 0.0,
        };
        for x in probes {
            let x_sq = x.norm_sqr().max(f64::MIN_POSITIVE);
            let mut t = x.clone();
            let mut sum_q = ComplexVector::zeros(x.dim());
            let mut energy = Vec::with_capacity(steps.len());
            let mut resolution = Vec::with_capacity(steps.len());
            for (n, &k) in steps.iter().enumerate() {
                let prev_sq = t.norm_sqr();
                if n > 0 {
                    let averaged: f64 = law
                        .atoms()
                        .iter()
                        .zip(law.weights())
                        .map(|(p, w)| w * p.apply_complement(&t).norm_sqr())
                        .sum();
                    path.contraction_excess = path.contraction_excess.max((averaged - (1.0 - c) * prev_sq) / x_sq);
                }
                let q = law.atoms()[k].apply(&t);
                t = &t - &q;
                sum_q = &sum_q + &q;
                let now = t.norm_sqr();
                if n > 0 {
                    path.split_defect = path.split_defect.max((now - (prev_sq - q.norm_sqr())).abs() / x_sq);
                }
                energy.push(now);
                resolution.push((x - &sum_q).norm_sqr());
            }
            path.energy.push(energy);
            path.resolution.push(resolution);
        }
        path
    });

    let steps = cfg.n_max + 1;
    let probe_reports = probes
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let initial = if cfg.randomize_first {
                law.atoms().iter().zip(law.weights()).map(|(p, w)| w * p.apply_complement(x).norm_sqr()).sum()
            } else {
                law.atoms()[0].apply_complement(x).norm_sqr()
            };
            let mut mean = Vec::with_capacity(steps);
            let mut std_err = Vec::with_capacity(steps);
            let mut res_mean = Vec::with_capacity(steps);
            let mut res_se = Vec::with_capacity(steps);
            for n in 0..steps {
                let e: Vec<f64> = paths.iter().map(|p| p.energy[i][n]).collect();
                let r: Vec<f64> = paths.iter().map(|p| p.resolution[i][n]).collect();
                let (e, r) = (MeanEstimate::from_samples(&e), MeanEstimate::from_samples(&r));
                mean.push(e.mean);
                std_err.push(e.std_err);
                res_mean.push(r.mean);
                res_se.push(r.std_err);
            }
            ProbeDecay {
                mean,
                std_err,
                envelope: (0..steps).map(|n| initial * (1.0 - c).powi(n as i32)).collect(),
                resolution_mean: res_mean,
                resolution_std_err: res_se,
                traces: paths.iter().map(|p| p.energy[i].clone()).collect(),
            }
        })
        .collect();

    Ok(DecayReport {
        c,
        config: cfg,
        probes: probe_reports,
        max_split_defect: paths.iter().map(|p| p.split_defect).fold(0.0, f64::max),
        max_contraction_excess: paths.iter().map(|p| p.contraction_excess).fold(0.0, f64::max),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarizationReport {
    /// Largest `|<x,y> - sum <Q_j x, Q_j y>| - sqrt(d(x) d(y))` along any path,
    /// with `d(v) = |v|^2 - sum |Q_j v|^2`.
    pub max_pathwise_excess: f64,
    /// `E |<x,y> - sum <Q_j x, Q_j y>|` at the last step.
    pub mean_bilinear_defect: f64,
    /// `sqrt(E d(x) E d(y))` at the last step.
    pub expectation_bound: f64,
    pub pass: bool,
}

/// Bilinear form of the random resolution of the identity: the defect in
/// `<x, y> = sum <x, Q_j* Q_j y>` is bounded by the quadratic defects.
pub fn polarization_check(law: &RandomProjectionLaw, x: &ComplexVector, y: &ComplexVector, cfg: RandomRunConfig) -> Result<PolarizationReport> {
    x.check_dim(law.dim())?;
    y.check_dim(law.dim())?;
    let xy = x.inner(y);
    let per_trial: Vec<(f64, f64, f64, f64)> = mc::map_indexed(cfg.trials.max(1), cfg.seed, |rng, _| {
        let (mut tx, mut ty) = (x.clone(), y.clone());
        let (mut bilinear, mut qx_sq, mut qy_sq) = (num_complex::Complex64::new(0.0, 0.0), 0.0, 0.0);
        let mut excess = f64::NEG_INFINITY;
        for n in 0..=cfg.n_max {
            let k = if n == 0 && !cfg.randomize_first { 0 } else { law.sample(rng) };
            let p = &law.atoms()[k];
            let (qx, qy) = (p.apply(&tx), p.apply(&ty));
            bilinear += qx.inner(&qy);
            qx_sq += qx.norm_sqr();
            qy_sq += qy.norm_sqr();
            tx = &tx - &qx;
            ty = &ty - &qy;
            let dx = (x.norm_sqr() - qx_sq).max(0.0);
            let dy = (y.norm_sqr() - qy_sq).max(0.0);
            excess = excess.max((xy - bilinear).norm() - (dx * dy).sqrt());
        }
        (excess, (xy - bilinear).norm(), x.norm_sqr() - qx_sq, y.norm_sqr() - qy_sq)
    });
    let col = |f: fn(&(f64, f64, f64, f64)) -> f64| per_trial.iter().map(f).collect::<Vec<_>>();
    let max_pathwise_excess = col(|t| t.0).into_iter().fold(f64::NEG_INFINITY, f64::max);
    let n = per_trial.len() as f64;
    let mean_bilinear_defect = mc::pairwise_sum(&col(|t| t.1)) / n;
    let expectation_bound = ((mc::pairwise_sum(&col(|t| t.2)) / n).max(0.0) * (mc::pairwise_sum(&col(|t| t.3)) / n).max(0.0)).sqrt();
    Ok(PolarizationReport {
        max_pathwise_excess,
        mean_bilinear_defect,
        expectation_bound,
        pass: max_pathwise_excess <= 1e-12 && mean_bilinear_defect <= expectation_bound + 1e-12,
    })
}
