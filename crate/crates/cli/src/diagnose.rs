use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use kaczmarz_core::kaczmarz::{default_probes, diagnose, SystemDescriptor, DEFAULT_RANDOM_PROBES};
use serde::Serialize;

use crate::input::read_json;
use crate::output::{num, Outcome, Staged};

#[derive(Debug, Args, Serialize)]
pub struct DiagnoseArgs {
    /// JSON projection-system descriptor (see README).
    #[arg(long)]
    system: PathBuf,
    /// Last step n; finite systems stop at their length.
    #[arg(long, default_value_t = 200)]
    steps: usize,
    /// Random unit probes, in addition to the standard basis.
    #[arg(long, default_value_t = DEFAULT_RANDOM_PROBES)]
    probes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Effectiveness tolerance on the final residual.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Summary {
    dim: usize,
    n_max: usize,
    max_delta1: f64,
    max_delta2: f64,
    residual: f64,
    effective: bool,
    tol: f64,
    final_parseval_defect: f64,
    pass: bool,
}

pub fn run(args: &DiagnoseArgs, config: &serde_json::Value) -> Result<Outcome> {
    let desc: SystemDescriptor = read_json(&args.system)?;
    let sys = desc.build()?;
    let n_max = match sys.len() {
        Some(len) => args.steps.min(len - 1),
        None => args.steps,
    };
    let probes = default_probes(sys.dim(), args.probes, args.seed);
    let rows = diagnose(&sys, n_max, &probes)?;
    let last = rows.last().expect("n_max >= 0");
    let max_delta1 = rows.iter().map(|r| r.delta1).fold(0.0, f64::max);
    let max_delta2 = rows.iter().map(|r| r.delta2).fold(0.0, f64::max);
    // The last row's t_norm is max |T_n x| over the probe panel, the effectiveness residual.
    let residual = last.t_norm;
    let effective = residual <= args.tol;
    let summary = Summary {
        dim: sys.dim(),
        n_max,
        max_delta1,
        max_delta2,
        residual,
        effective,
        tol: args.tol,
        final_parseval_defect: last.parseval_defect,
        pass: max_delta1 <= 1e-11 && max_delta2 <= 1e-11,
    };
    let out = Staged::new(&args.out, config)?;
    out.csv(
        "diagnostics.csv",
        &["n", "t_norm", "delta1", "delta2", "parseval_defect"],
        rows.iter().map(|r| vec![r.n.to_string(), num(r.t_norm), num(r.delta1), num(r.delta2), num(r.parseval_defect)]),
    )?;
    out.json("summary.json", &summary)?;
    out.commit()?;
    Ok(Outcome::from_check(summary.pass, "operator identities exceed 1e-11"))
}
