use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use kaczmarz_core::frames::{
    cauchy_coeffs, cauchy_identity, defect_curve, frame_operator_two_ways, gram_window, kaczmarz_duals_L2mu, CauchyIdentity,
    Enumeration, FunctionCoeffs, GramMeta,
};
use kaczmarz_core::ifs::DEFAULT_FOURIER_TOL;
use kaczmarz_core::Error;
use serde::Serialize;

use crate::input::{ifs_system, parse_list};
use crate::output::{num, Outcome, Staged};

/// Tolerance for the dual recursion, relation and two-ways checks.
const DUAL_TOL: f64 = 1e-9;
/// Floor above which the defect curve is flagged as not approaching zero.
const FLOOR_WARNING: f64 = 0.1;

#[derive(Debug, Args, Serialize)]
pub struct FramesArgs {
    /// Built-in name or JSON descriptor path.
    #[arg(long)]
    system: String,
    /// diagonal | square-shell | lexicographic | 1d-natural. Default: 1d-natural in
    /// dimension 1, diagonal otherwise.
    #[arg(long)]
    enumeration: Option<String>,
    /// Window sizes for the defect curve; the largest one is written out.
    #[arg(long, default_value = "16,32,64,128")]
    sizes: String,
    /// exp:N1[,N2..] | cos:AXIS:FREQ | const. Default: exp:1 in dimension 1, cos:0:1 otherwise.
    #[arg(long)]
    function: Option<String>,
    /// Truncation tolerance for mu^.
    #[arg(long, default_value_t = DEFAULT_FOURIER_TOL)]
    tol: f64,
    /// Evaluation point of the Cauchy identity (1d-natural only).
    #[arg(long, default_value_t = 0.3)]
    cauchy_z: f64,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Summary {
    system: String,
    enumeration: Enumeration,
    function: FunctionCoeffs,
    defect_curve: Vec<(usize, f64)>,
    non_increasing: bool,
    floor: f64,
    warning: Option<String>,
    triangular_defect: f64,
    relation_defect: f64,
    two_ways_defect: f64,
    cauchy: Option<CauchyIdentity>,
    pass: bool,
}

fn parse_function(arg: &str, dim: usize) -> Result<FunctionCoeffs> {
    let bad = || Error::InvalidArgument(format!("bad function {arg:?}; expected exp:N, cos:AXIS:FREQ or const"));
    let parts: Vec<&str> = arg.split(':').collect();
    match parts.as_slice() {
        ["const"] => Ok(FunctionCoeffs::constant(dim)),
        ["exp", n] => {
            let n = parse_list::<i64>(n)?;
            if n.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: n.len() }.into());
            }
            Ok(FunctionCoeffs::exponential(n))
        }
        ["cos", axis, freq] => {
            let axis: usize = axis.parse().map_err(|_| bad())?;
            let freq: i64 = freq.parse().map_err(|_| bad())?;
            if axis >= dim {
                return Err(Error::InvalidArgument(format!("axis {axis} out of range for dimension {dim}")).into());
            }
            Ok(FunctionCoeffs::cosine(dim, axis, freq))
        }
        _ => Err(bad().into()),
    }
}

pub fn run(args: &FramesArgs, config: &serde_json::Value) -> Result<Outcome> {
    let sys = ifs_system(&args.system)?;
    let dim = sys.dim();
    let enumeration = match &args.enumeration {
        Some(s) => Enumeration::parse(s)?,
        None if dim == 1 => Enumeration::Natural1d,
        None => Enumeration::Diagonal,
    };
    let f = match &args.function {
        Some(s) => parse_function(s, dim)?,
        None if dim == 1 => FunctionCoeffs::exponential(vec![1]),
        None => FunctionCoeffs::cosine(dim, 0, 1),
    };
    let mut sizes = parse_list::<usize>(&args.sizes)?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidArgument("sizes must be positive".into()).into());
    }
    sizes.sort_unstable();
    sizes.dedup();
    let size = *sizes.last().unwrap();

    let w = gram_window(&sys, enumeration, size, args.tol)?;
    let duals = kaczmarz_duals_L2mu(&w);
    let two_ways = frame_operator_two_ways(&w, &duals)?;
    let curve = defect_curve(&sys, enumeration, &sizes, args.tol, &f)?;
    let non_increasing = curve.windows(2).all(|p| p[1].1 <= p[0].1 + 1e-12);
    let floor = curve.last().unwrap().1;
    let cauchy = if enumeration == Enumeration::Natural1d {
        let cc = cauchy_coeffs(&w, &duals, &f)?;
        Some((cauchy_identity(&w, &cc, args.cauchy_z)?, cc))
    } else {
        None
    };

    let staged = Staged::new(&args.out, config)?;
    let n = w.size();
    let g = w.matrix();
    staged.csv(
        "gram.csv",
        &["m", "n", "re", "im"],
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| {
            let z = g.get(i, j);
            vec![i.to_string(), j.to_string(), num(z.re), num(z.im)]
        }),
    )?;
    let meta: GramMeta = w.meta();
    staged.json("gram.json", &serde_json::json!({ "meta": meta, "indices": w.indices() }))?;
    let c = duals.matrix();
    staged.csv(
        "duals.csv",
        &["n", "j", "re", "im"],
        (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).map(|(i, j)| {
            let z = c.get(i, j);
            vec![i.to_string(), j.to_string(), num(z.re), num(z.im)]
        }),
    )?;
    staged.csv("defect_curve.csv", &["size", "defect"], curve.iter().map(|(s, d)| vec![s.to_string(), num(*d)]))?;
    if let Some((_, cc)) = &cauchy {
        staged.csv(
            "cauchy.csv",
            &["n", "coeff_re", "coeff_im", "inner_re", "inner_im"],
            cc.coeffs.iter().zip(&cc.inner_products).enumerate().map(|(k, (a, v))| {
                vec![k.to_string(), num(a.re), num(a.im), num(v.re), num(v.im)]
            }),
        )?;
    }

    let cauchy = cauchy.map(|(id, _)| id);
    let cauchy_ok = cauchy
        .as_ref()
        .is_none_or(|id| id.coefficient_residual <= DUAL_TOL && id.value_residual <= id.truncation_bound + DUAL_TOL);
    let pass = duals.triangular_defect <= DUAL_TOL && duals.relation_defect <= DUAL_TOL && two_ways <= DUAL_TOL && non_increasing && cauchy_ok;
    let warning = (floor > FLOOR_WARNING).then(|| format!("defect floor {floor:.4} > {FLOOR_WARNING}: the system does not reach f"));
    if let Some(msg) = &warning {
        eprintln!("warning: {msg}");
    }
    let summary = Summary {
        system: sys.name().to_string(),
        enumeration,
        function: f,
        defect_curve: curve,
        non_increasing,
        floor,
        warning,
        triangular_defect: duals.triangular_defect,
        relation_defect: duals.relation_defect,
        two_ways_defect: two_ways,
        cauchy,
        pass,
    };
    staged.json("summary.json", &summary)?;
    staged.commit()?;
    Ok(Outcome::from_check(pass, "dual checks or monotone defect curve failed"))
}
