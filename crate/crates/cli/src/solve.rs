use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use kaczmarz_core::kaczmarz::{cyclic_sweeps, fig2_system, Scalar};
use kaczmarz_core::linalg::{ComplexMatrix, ComplexVector};
use kaczmarz_core::random::{solve_ensemble, standard_frame};
use kaczmarz_core::Error;
use serde::{Deserialize, Serialize};

use crate::input::{read_json, read_real_csv};
use crate::output::{ensure_positive, num, Outcome, Staged};

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cyclic,
    Random,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    /// `fig2` or a JSON file `{"a": [[..]], "b": [..]}` (entries real or [re, im]).
    #[arg(long, conflicts_with_all = ["matrix", "rhs"])]
    system: Option<String>,
    /// Headerless CSV with the rows of A.
    #[arg(long, requires = "rhs")]
    matrix: Option<PathBuf>,
    /// Headerless CSV with b (one column or one row).
    #[arg(long, requires = "matrix")]
    rhs: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "cyclic")]
    mode: Mode,
    /// Sweeps (cyclic) or single steps (random).
    #[arg(long, default_value_t = 500)]
    steps: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Deserialize)]
struct SystemFile {
    a: Vec<Vec<Scalar>>,
    b: Vec<Scalar>,
}

fn load(args: &SolveArgs) -> Result<(ComplexMatrix, ComplexVector)> {
    match (&args.system, &args.matrix, &args.rhs) {
        (Some(s), _, _) if s == "fig2" => Ok(fig2_system()),
        (Some(path), _, _) => {
            let f: SystemFile = read_json(path.as_ref())?;
            let rows: Vec<ComplexVector> = f.a.iter().map(|r| ComplexVector::new(r.iter().map(|&s| s.into()).collect())).collect();
            let a = ComplexMatrix::from_rows(&rows)?;
            Ok((a, ComplexVector::new(f.b.iter().map(|&s| s.into()).collect())))
        }
        (None, Some(m), Some(r)) => {
            let a = ComplexMatrix::from_real_rows(&read_real_csv(m)?)?;
            let b: Vec<f64> = read_real_csv(r)?.into_iter().flatten().collect();
            Ok((a, ComplexVector::from_real(&b)))
        }
        _ => Err(Error::InvalidArgument("give --system or both --matrix and --rhs".into()).into()),
    }
}

#[derive(Serialize)]
struct CyclicSummary {
    mode: &'static str,
    sweeps: usize,
    direct_solution: Vec<[f64; 2]>,
    final_error: f64,
    max_pythagoras_defect: f64,
    monotone: bool,
    pass: bool,
}

#[derive(Serialize)]
struct RandomSummary {
    mode: &'static str,
    steps: usize,
    trials: usize,
    seed: u64,
    c_certified: f64,
    median_final_error: f64,
    envelope_ratio_max: f64,
    within_envelope: bool,
    pass: bool,
}

fn pairs(x: &ComplexVector) -> Vec<[f64; 2]> {
    x.iter().map(|z| [z.re, z.im]).collect()
}

pub fn run(args: &SolveArgs, config: &serde_json::Value) -> Result<Outcome> {
    ensure_positive("steps", args.steps)?;
    let (a, b) = load(args)?;
    match args.mode {
        Mode::Cyclic => {
            let x_star = a.solve(&b)?;
            let trace = cyclic_sweeps(&a, &b, &ComplexVector::zeros(a.cols()), args.steps)?;
            let errors = trace.errors(&x_star);
            let defects = trace.pythagoras_defects(&x_star);
            let max_pythagoras_defect = defects.iter().copied().fold(0.0, f64::max);
            let monotone = errors.windows(2).all(|w| w[1] <= w[0] + 1e-12);
            let summary = CyclicSummary {
                mode: "cyclic",
                sweeps: args.steps,
                direct_solution: pairs(&x_star),
                final_error: *errors.last().unwrap(),
                max_pythagoras_defect,
                monotone,
                pass: max_pythagoras_defect <= 1e-10 && monotone,
            };
            let out = Staged::new(&args.out, config)?;
            let mut header = vec!["step".to_string(), "error".to_string()];
            for i in 0..a.cols() {
                header.push(format!("x{i}_re"));
                header.push(format!("x{i}_im"));
            }
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            out.csv(
                "trace.csv",
                &header,
                trace.iterates.iter().zip(&errors).enumerate().map(|(k, (x, e))| {
                    let mut row = vec![k.to_string(), num(*e)];
                    row.extend(x.iter().flat_map(|z| [num(z.re), num(z.im)]));
                    row
                }),
            )?;
            out.json("summary.json", &summary)?;
            out.commit()?;
            Ok(Outcome::from_check(summary.pass, "cyclic sweeps violate the per-step Pythagoras identity"))
        }
        Mode::Random => {
            let seed = args.seed.ok_or_else(|| Error::InvalidArgument("--seed is required in random mode".into()))?;
            let frame = standard_frame(a.rows());
            let ens = solve_ensemble(&a, &b, &frame, args.steps, args.trials, seed, &ComplexVector::zeros(a.cols()))?;
            let summary = RandomSummary {
                mode: "random",
                steps: args.steps,
                trials: args.trials,
                seed,
                c_certified: ens.c_certified,
                median_final_error: ens.median_final_error,
                envelope_ratio_max: ens.envelope_ratio_max(),
                within_envelope: ens.within_envelope(),
                pass: ens.within_envelope(),
            };
            let out = Staged::new(&args.out, config)?;
            out.csv(
                "trace.csv",
                &["step", "mean_sq_error", "std_err", "envelope", "median_error"],
                (0..=args.steps).map(|j| {
                    vec![j.to_string(), num(ens.mean_sq_error[j]), num(ens.std_err[j]), num(ens.envelope[j]), num(ens.median_error[j])]
                }),
            )?;
            out.json("summary.json", &summary)?;
            out.commit()?;
            Ok(Outcome::from_check(summary.pass, "mean squared error leaves the (1 - C)^n envelope"))
        }
    }
}
