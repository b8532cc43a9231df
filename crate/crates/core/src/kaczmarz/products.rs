use rayon::prelude::*;
use serde::Serialize;

use super::duals::{dual_sequence, DualSequence};
use super::system::ProjectionSystem;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::mc;

/// Number of seeded random probes used when none are supplied.
pub const DEFAULT_RANDOM_PROBES: usize = 32;

/// Seeded random unit vectors followed by the standard basis.
pub fn default_probes(dim: usize, random: usize, seed: u64) -> Vec<ComplexVector> {
    let mut rng = mc::stream(seed, 0);
    let mut probes: Vec<_> = (0..random).map(|_| ComplexVector::random_unit(dim, &mut rng)).collect();
    probes.extend((0..dim).map(|i| ComplexVector::basis(dim, i)));
    probes
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Keep the matrices `T_n` and `Q_n` (memory `O(n d^2)`).
    pub store_operators: bool,
    /// Run the dual recursion when every projection is rank one.
    pub compute_duals: bool,
    /// Tolerance for the finite-horizon effectiveness flag.
    pub effectiveness_tol: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            store_operators: false,
            compute_duals: false,
            effectiveness_tol: 1e-8,
        }
    }
}

/// Finite-horizon surrogate for `T_n -> 0` strongly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveFlag {
    pub effective: bool,
    /// `max |T_horizon x| / |x|` over the probes.
    pub residual: f64,
    pub horizon: usize,
    pub tol: f64,
    pub probes: usize,
}

#[derive(Debug, Clone)]
pub struct KaczmarzTrajectory {
    /// `|T_n x|` for each probe (outer) and step `n = 0..=n_max` (inner).
    pub t_norms: Vec<Vec<f64>>,
    /// `|Q_n x|`, same layout.
    pub q_norms: Vec<Vec<f64>>,
    pub probe_norms: Vec<f64>,
    pub t_ops: Option<Vec<ComplexMatrix>>,
    pub q_ops: Option<Vec<ComplexMatrix>>,
    pub duals: Option<DualSequence>,
    pub effective: EffectiveFlag,
}

impl KaczmarzTrajectory {
    /// Largest relative defect in `|T_n x|^2 + sum_{j<=n} |Q_j x|^2 = |x|^2`.
    pub fn energy_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for ((t, q), &x) in self.t_norms.iter().zip(&self.q_norms).zip(&self.probe_norms) {
            let mut acc = 0.0;
            for (tn, qn) in t.iter().zip(q) {
                acc += qn * qn;
                worst = worst.max((tn * tn + acc - x * x).abs() / (x * x).max(f64::MIN_POSITIVE));
            }
        }
        worst
    }

    /// Whether every probe has `|T_n x|` non-increasing (up to `slack`).
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.t_norms.iter().all(|t| t.windows(2).all(|w| w[1] <= w[0] + slack))
    }

    /// `max_probe |T_n x| / |x|` per step.
    pub fn residual_curve(&self) -> Vec<f64> {
        let steps = self.t_norms.first().map_or(0, Vec::len);
        (0..steps)
            .map(|n| {
                self.t_norms
                    .iter()
                    .zip(&self.probe_norms)
                    .map(|(t, &x)| if x > 0.0 { t[n] / x } else { 0.0 })
                    .fold(0.0, f64::max)
            })
            .collect()
    }
}

/// Builds `T_n = (1 - P_n) ... (1 - P_0)` and `Q_n = P_n T_{n-1}` (`Q_0 = P_0`)
/// for `n = 0..=n_max` and records their action on each probe.
pub fn run_products(sys: &ProjectionSystem, n_max: usize, probes: &[ComplexVector], opts: RunOptions) -> Result<KaczmarzTrajectory> {
    sys.require(n_max)?;
    if probes.is_empty() {
        return Err(Error::InvalidArgument("at least one probe vector is required".into()));
    }
    for x in probes {
        x.check_dim(sys.dim())?;
    }

    let per_probe: Vec<(Vec<f64>, Vec<f64>)> = probes
        .par_iter()
        .map(|x| {
            let mut t = x.clone();
            let mut t_norms = Vec::with_capacity(n_max + 1);
            let mut q_norms = Vec::with_capacity(n_max + 1);
            for n in 0..=n_max {
                let q = sys.get(n).expect("checked length").apply(&t);
                t = &t - &q;
                t_norms.push(t.norm());
                q_norms.push(q.norm());
            }
            (t_norms, q_norms)
        })
        .collect();
    let (t_norms, q_norms): (Vec<_>, Vec<_>) = per_probe.into_iter().unzip();
    let probe_norms: Vec<f64> = probes.iter().map(ComplexVector::norm).collect();

    let (t_ops, q_ops) = if opts.store_operators {
        let (t, q) = operator_products(sys, n_max);
        (Some(t), Some(q))
    } else {
        (None, None)
    };

    let duals = if opts.compute_duals {
        Some(dual_sequence(&sys.unit_vectors(n_max)?)?)
    } else {
        None
    };

    let residual = t_norms
        .iter()
        .zip(&probe_norms)
        .map(|(t, &x)| if x > 0.0 { t[n_max] / x } else { 0.0 })
        .fold(0.0, f64::max);

    Ok(KaczmarzTrajectory {
        t_norms,
        q_norms,
        probe_norms,
        t_ops,
        q_ops,
        duals,
        effective: EffectiveFlag {
            effective: residual <= opts.effectiveness_tol,
            residual,
            horizon: n_max,
            tol: opts.effectiveness_tol,
            probes: probes.len(),
        },
    })
}

/// Matrices `T_0..T_n` and `Q_0..Q_n`.
pub(crate) fn operator_products(sys: &ProjectionSystem, n_max: usize) -> (Vec<ComplexMatrix>, Vec<ComplexMatrix>) {
    let d = sys.dim();
    let mut ts = Vec::with_capacity(n_max + 1);
    let mut qs = Vec::with_capacity(n_max + 1);
    let mut t = ComplexMatrix::identity(d);
    for n in 0..=n_max {
        let q = sys.get(n).expect("checked length").left_multiply(&t);
        t = &t - &q;
        ts.push(t.clone());
        qs.push(q);
    }
    (ts, qs)
}

/// Per-step residuals of the operator identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityRow {
    pub n: usize,
    /// `|(1 - T_n* T_n) - sum_{j<=n} Q_j* Q_j|`
    pub delta1: f64,
    /// `|(1 - T_n) - sum_{j<=n} Q_j|`
    pub delta2: f64,
    /// `|Q_n - (T_{n-1} - T_n)|` with `T_{-1} = 1`.
    pub telescoping: f64,
    /// `|Q_n - P_n (1 - sum_{j<n} Q_j)|`
    pub lemma_qn: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub rows: Vec<IdentityRow>,
}

impl IdentityReport {
    fn max_of(&self, f: impl Fn(&IdentityRow) -> f64) -> f64 {
        self.rows.iter().map(f).fold(0.0, f64::max)
    }

    pub fn max_delta1(&self) -> f64 {
        self.max_of(|r| r.delta1)
    }

    pub fn max_delta2(&self) -> f64 {
        self.max_of(|r| r.delta2)
    }

    pub fn max_telescoping(&self) -> f64 {
        self.max_of(|r| r.telescoping)
    }

    pub fn max_lemma_qn(&self) -> f64 {
        self.max_of(|r| r.lemma_qn)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_delta1() <= tol && self.max_delta2() <= tol
    }
}

/// Checks `1 - T_n* T_n = sum Q_j* Q_j` and `1 - T_n = sum Q_j` at every step.
pub fn verify_identities(sys: &ProjectionSystem, n_max: usize) -> Result<IdentityReport> {
    sys.require(n_max)?;
    let d = sys.dim();
    let id = ComplexMatrix::identity(d);
    let (ts, qs) = operator_products(sys, n_max);
    let mut sum_qq = ComplexMatrix::zeros(d, d);
    let mut sum_q = ComplexMatrix::zeros(d, d);
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let prev_t = if n == 0 { &id } else { &ts[n - 1] };
        let telescoping = (&qs[n] - &(prev_t - &ts[n])).operator_norm();
        let lemma = sys.get(n).expect("checked length").left_multiply(&(&id - &sum_q));
        let lemma_qn = (&qs[n] - &lemma).operator_norm();

        sum_qq = &sum_qq + &(&qs[n].adjoint() * &qs[n]);
        sum_q = &sum_q + &qs[n];
        let lhs1 = &id - &(&ts[n].adjoint() * &ts[n]);
        let lhs2 = &id - &ts[n];
        rows.push(IdentityRow {
            n,
            delta1: (&lhs1 - &sum_qq).operator_norm(),
            delta2: (&lhs2 - &sum_q).operator_norm(),
            telescoping,
            lemma_qn,
        });
    }
    Ok(IdentityReport { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectivenessReport {
    pub effective: bool,
    pub residual: f64,
    pub horizon: usize,
    pub tol: f64,
    pub probes: usize,
}

/// `max |T_horizon x|` over `probes` seeded random unit vectors plus the
/// standard basis; effective iff that residual is at most `tol`.
pub fn effectiveness_test(sys: &ProjectionSystem, horizon: usize, probes: usize, tol: f64, seed: u64) -> Result<EffectivenessReport> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let panel = default_probes(sys.dim(), probes, seed);
    let traj = run_products(sys, horizon, &panel, RunOptions { effectiveness_tol: tol, ..RunOptions::default() })?;
    let f = traj.effective;
    Ok(EffectivenessReport {
        effective: f.effective,
        residual: f.residual,
        horizon,
        tol,
        probes: f.probes,
    })
}

/// One line of the per-step diagnostic table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticRow {
    pub n: usize,
    /// `max |T_n x| / |x|` over the probes.
    pub t_norm: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// `max |sum_{j<=n} |Q_j x|^2 - |x|^2| / |x|^2` over the probes.
    pub parseval_defect: f64,
}

/// Identity residuals, effectiveness residual and Parseval defect per step.
pub fn diagnose(sys: &ProjectionSystem, n_max: usize, probes: &[ComplexVector]) -> Result<Vec<DiagnosticRow>> {
    let identities = verify_identities(sys, n_max)?;
    let traj = run_products(sys, n_max, probes, RunOptions::default())?;
    let curve = traj.residual_curve();
    let mut parseval = vec![0.0f64; n_max + 1];
    for (q, &x) in traj.q_norms.iter().zip(&traj.probe_norms) {
        if x == 0.0 {
            continue;
        }
        let mut acc = 0.0;
        for (n, qn) in q.iter().enumerate() {
            acc += qn * qn;
            parseval[n] = parseval[n].max((acc - x * x).abs() / (x * x));
        }
    }
    Ok(identities
        .rows
        .iter()
        .map(|r| DiagnosticRow {
            n: r.n,
            t_norm: curve[r.n],
            delta1: r.delta1,
            delta2: r.delta2,
            parseval_defect: parseval[r.n],
        })
        .collect())
}
