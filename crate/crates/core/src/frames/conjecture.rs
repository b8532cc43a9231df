use serde::Serialize;

use crate::error::Result;
use crate::frames::{defect_curve, Enumeration, FunctionCoeffs};
use crate::ifs::{perron_frobenius_check, DigitLaw, IfsSystem};

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub system: String,
    /// `v = (Pr(eps = e))_e`, the law of an x digit.
    pub x_marginal: Vec<f64>,
    /// Stationary vector of `T = Pr(eta | eps)` when `T` is square.
    pub stationary: Option<Vec<f64>>,
    /// `|vT - v|_inf` for the x marginal restricted to its support.
    pub pf_defect: Option<f64>,
    pub constant: bool,
    pub enumeration: Enumeration,
    pub test_function: FunctionCoeffs,
    pub defect_curve: Vec<(usize, f64)>,
    pub decreasing: bool,
    pub final_defect: f64,
}

/// Digit-chain side and totality side of the slice conjecture, reported without linking them.
/// The totality proxy is the Parseval defect of `f` (default `cos(2 pi x_1)`) over nested windows.
pub fn conjecture_probe(
    sys: &IfsSystem,
    sizes: &[usize],
    enumeration: Enumeration,
    f: Option<FunctionCoeffs>,
    tol: f64,
) -> Result<ConjectureReport> {
    let law = DigitLaw::from_ifs(sys)?;
    let x_marginal = law.x_marginal();
    let (stationary, pf_defect) = match law.transition() {
        Ok(t) => {
            let v: Vec<f64> = x_marginal.iter().copied().filter(|p| *p > 0.0).collect();
            let r = perron_frobenius_check(&t, &v)?;
            (Some(r.stationary), Some(r.defect))
        }
        Err(_) => (None, None),
    };
    let lo = x_marginal.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x_marginal.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let constant = hi - lo <= 1e-12;
    let f = f.unwrap_or_else(|| FunctionCoeffs::cosine(sys.dim(), 0, 1));
    let curve = defect_curve(sys, enumeration, sizes, tol, &f)?;
    let decreasing = curve.windows(2).all(|w| w[1].1 < w[0].1);
    let final_defect = curve.last().map_or(f64::NAN, |c| c.1);
    Ok(ConjectureReport {
        system: sys.name().to_string(),
        x_marginal,
        stationary,
        pf_defect,
        constant,
        enumeration,
        test_function: f,
        defect_curve: curve,
        decreasing,
        final_defect,
    })
}
