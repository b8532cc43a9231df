use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand, ValueEnum};
use kaczmarz_core::ifs::{
    cell_masses, cell_membership, chaos_sample, digit_statistics, fourier_eval, geometry_report, kakutani_affinity, scaling_residual,
    ChaosConfig, SamplingMode, DEFAULT_BURN_IN, DEFAULT_FOURIER_TOL,
};
use kaczmarz_core::Error;
use serde::Serialize;

use crate::input::{ifs_system, parse_list};
use crate::output::{ensure_positive, num, Outcome, Staged};

#[derive(Debug, Args, Serialize)]
pub struct IfsArgs {
    #[command(subcommand)]
    action: IfsAction,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Independent,
    Chain,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "action", rename_all = "kebab-case")]
enum IfsAction {
    /// Chaos-game point cloud and first-level cell masses.
    Sample {
        /// Built-in name or JSON descriptor path.
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BURN_IN)]
        burn_in: usize,
        #[arg(long, value_enum, default_value = "independent")]
        mode: ModeArg,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Table of mu^(n) for integer n with |n_i| <= window.
    Fourier {
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 3)]
        window: i64,
        #[arg(long, default_value_t = DEFAULT_FOURIER_TOL)]
        tol: f64,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Digit statistics of the first two coordinates.
    Digits {
        #[arg(long, default_value = "sierpinski-gasket")]
        system: String,
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Removed area and box-counting dimension of the prefractal.
    Geometry {
        #[arg(long, default_value = "sierpinski-gasket")]
        system: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Hellinger affinity of two digit laws and the Kakutani verdict.
    Kakutani {
        /// Comma-separated probabilities.
        #[arg(long, default_value = "0.6666666666666666,0.3333333333333333")]
        p: String,
        #[arg(long, default_value = "0.5,0.5")]
        q: String,
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(Serialize)]
struct SampleSummary {
    system: String,
    n: usize,
    cell_masses: Vec<f64>,
    expected: Vec<f64>,
    bands: Vec<f64>,
    membership_multiple: usize,
    membership_none: usize,
    membership_mislabelled: usize,
    pass: bool,
}

#[derive(Serialize)]
struct FourierSummary {
    system: String,
    window: i64,
    tol: f64,
    max_tail_bound: f64,
    max_scaling_residual: f64,
    pass: bool,
}

#[derive(Serialize)]
struct GeometrySummary {
    system: String,
    depth: usize,
    removed_area: f64,
    removed_area_gap: f64,
    box_dim: f64,
    box_dim_target: f64,
    pass: bool,
}

fn integer_grid(dim: usize, k: i64) -> Vec<Vec<i64>> {
    let side = (2 * k + 1) as usize;
    (0..side.pow(dim as u32))
        .map(|code| (0..dim).rev().map(|i| (code / side.pow(i as u32) % side) as i64 - k).collect())
        .collect()
}

pub fn run(args: &IfsArgs, config: &serde_json::Value) -> Result<Outcome> {
    match &args.action {
        IfsAction::Sample { system, n, seed, burn_in, mode, out } => {
            ensure_positive("n", *n)?;
            let sys = ifs_system(system)?;
            let mode = match mode {
                ModeArg::Independent => SamplingMode::Independent,
                ModeArg::Chain => SamplingMode::Chain,
            };
            let cfg = ChaosConfig { burn_in: *burn_in, ..ChaosConfig::new(*n, *seed).with_log_digits(1).with_mode(mode) };
            let cloud = chaos_sample(&sys, &cfg)?;
            let masses = cell_masses(&sys, &cloud)?;
            let bands: Vec<f64> = sys.weights().iter().map(|p| 3.0 * (p * (1.0 - p) / *n as f64).sqrt()).collect();
            let pass = masses.iter().zip(sys.weights()).zip(&bands).all(|((m, p), b)| (m - p).abs() <= *b);
            let membership = cell_membership(&sys, &cloud, 1e-12);
            let staged = Staged::new(out, config)?;
            let header: Vec<String> = (1..=sys.dim()).map(|i| format!("x{i}")).collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            staged.csv("points.csv", &header, cloud.points().map(|p| p.iter().map(|v| num(*v)).collect()))?;
            let summary = SampleSummary {
                system: sys.name().to_string(),
                n: *n,
                cell_masses: masses,
                expected: sys.weights().to_vec(),
                bands,
                membership_multiple: membership.multiple,
                membership_none: membership.none,
                membership_mislabelled: membership.mislabelled,
                pass,
            };
            staged.json("summary.json", &summary)?;
            staged.commit()?;
            Ok(Outcome::from_check(pass, "cell masses outside their 3-sigma bands"))
        }
        IfsAction::Fourier { system, window, tol, out } => {
            if *window < 0 {
                return Err(Error::InvalidArgument("window must be non-negative".into()).into());
            }
            let sys = ifs_system(system)?;
            let grid = integer_grid(sys.dim(), *window);
            let mut rows = Vec::with_capacity(grid.len());
            let mut max_tail = 0.0f64;
            let mut max_res = 0.0f64;
            for n in &grid {
                let l: Vec<f64> = n.iter().map(|&v| v as f64).collect();
                let v = fourier_eval(&sys, &l, *tol)?;
                max_tail = max_tail.max(v.tail_bound);
                max_res = max_res.max(scaling_residual(&sys, &l, *tol)?);
                let mut row: Vec<String> = n.iter().map(|k| k.to_string()).collect();
                row.extend([num(v.value.re), num(v.value.im), num(v.tail_bound)]);
                rows.push(row);
            }
            let staged = Staged::new(out, config)?;
            let mut header: Vec<String> = (1..=sys.dim()).map(|i| format!("n{i}")).collect();
            header.extend(["re", "im", "tail_bound"].map(String::from));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            staged.csv("fourier.csv", &header, rows)?;
            let summary = FourierSummary {
                system: sys.name().to_string(),
                window: *window,
                tol: *tol,
                max_tail_bound: max_tail,
                max_scaling_residual: max_res,
                pass: max_res <= 1e-10,
            };
            staged.json("summary.json", &summary)?;
            staged.commit()?;
            Ok(Outcome::from_check(summary.pass, "scaling relation residual above 1e-10"))
        }
        IfsAction::Digits { system, n, depth, seed, out } => {
            ensure_positive("n", *n)?;
            let sys = ifs_system(system)?;
            let report = digit_statistics(&sys, *n, *depth, *seed)?;
            let staged = Staged::new(out, config)?;
            let (bx, by) = (report.law.base_x as usize, report.law.base_y as usize);
            let mut header = vec!["k".to_string(), "pr_eps0".into(), "pr_eta0".into()];
            for e in 0..bx {
                for h in 0..by {
                    header.push(format!("pr_eta{h}_given_eps{e}"));
                }
            }
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            staged.csv(
                "digits.csv",
                &header,
                report.levels.iter().map(|l| {
                    let mut row = vec![l.k.to_string(), num(l.pr_eps0), num(l.pr_eta0)];
                    row.extend(l.conditional.iter().flatten().map(|v| num(*v)));
                    row
                }),
            )?;
            staged.json("summary.json", &report)?;
            staged.commit()?;
            Ok(Outcome::from_check(report.pass, "digit frequencies outside their bands or forbidden digit pairs"))
        }
        IfsAction::Geometry { system, depth, out } => {
            let sys = ifs_system(system)?;
            let r = geometry_report(&sys, *depth)?;
            let pass = r.box_dim.is_nan() || (r.box_dim - r.box_dim_target).abs() <= 0.05;
            let staged = Staged::new(out, config)?;
            staged.csv("boxes.csv", &["scale_exponent", "boxes"], r.counts.iter().map(|c| vec![c.scale_exponent.to_string(), c.boxes.to_string()]))?;
            let summary = GeometrySummary {
                system: sys.name().to_string(),
                depth: *depth,
                removed_area: r.removed_area,
                removed_area_gap: r.removed_area_limit - r.removed_area,
                box_dim: r.box_dim,
                box_dim_target: r.box_dim_target,
                pass,
            };
            staged.json("summary.json", &summary)?;
            staged.commit()?;
            Ok(Outcome::from_check(pass, "box dimension further than 0.05 from ln N / ln m"))
        }
        IfsAction::Kakutani { p, q, out } => {
            let (p, q) = (parse_list::<f64>(p)?, parse_list::<f64>(q)?);
            let r = kakutani_affinity(&p, &q)?;
            let staged = Staged::new(out, config)?;
            staged.json("summary.json", &r)?;
            staged.commit()?;
            Ok(Outcome::Pass)
        }
    }
}
