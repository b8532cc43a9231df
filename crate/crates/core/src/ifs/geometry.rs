use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::IfsSystem;

/// Total area of the triangles removed from the unit right triangle in the first `depth`
/// steps of the gasket construction: `(1/2) sum_{k=1}^{depth} 3^(k-1) / 4^k`.
pub fn removed_area(depth: usize) -> f64 {
    let mut total = 0.0;
    let mut term = 0.125;
    for _ in 0..depth {
        total += term;
        term *= 0.75;
    }
    total
}

const MAX_PREFRACTAL_POINTS: usize = 1 << 24;

/// Images `tau_w(c)` of the centre of mass over all words of length `depth` with positive-weight digits.
pub fn prefractal_points(sys: &IfsSystem, depth: usize) -> Result<Vec<Vec<f64>>> {
    let active: Vec<usize> = (0..sys.digits().len()).filter(|&b| sys.weights()[b] > 0.0).collect();
    let count = (active.len() as f64).powi(depth as i32);
    if count > MAX_PREFRACTAL_POINTS as f64 {
        return Err(Error::InvalidArgument(format!("depth {depth} needs {count} points")));
    }
    // Centre of mass c solves c = M^-1 c + sum_b p_b M^-1 b.
    let d = sys.dim();
    let mut c = vec![0.0; d];
    for _ in 0..200 {
        let mut next = vec![0.0; d];
        for (b, p) in sys.weights().iter().enumerate() {
            let y = sys.tau(b, &c);
            next.iter_mut().zip(&y).for_each(|(n, v)| *n += p * v);
        }
        c = next;
    }
    let mut pts = vec![c];
    for _ in 0..depth {
        pts = pts.iter().flat_map(|p| active.iter().map(move |&b| sys.tau(b, p))).collect();
    }
    Ok(pts)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxCount {
    pub scale_exponent: usize,
    pub boxes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometryReport {
    pub depth: usize,
    pub removed_area: f64,
    pub removed_area_limit: f64,
    pub box_dim: f64,
    pub box_dim_target: f64,
    pub counts: Vec<BoxCount>,
}

/// Occupied boxes of side `2^-s` for `s = 3..=depth` and the least-squares slope of
/// `log2 N(s)` against `s`.
pub fn box_dimension(sys: &IfsSystem, depth: usize) -> Result<(f64, Vec<BoxCount>)> {
    if depth < 4 {
        return Err(Error::InvalidArgument("box counting needs depth >= 4".into()));
    }
    let pts = prefractal_points(sys, depth)?;
    let counts: Vec<BoxCount> = (3..=depth)
        .map(|s| {
            let scale = 2f64.powi(s as i32);
            let mut keys: Vec<Vec<i64>> = pts.iter().map(|p| p.iter().map(|v| (v * scale).floor() as i64).collect()).collect();
            keys.sort_unstable();
            keys.dedup();
            BoxCount { scale_exponent: s, boxes: keys.len() }
        })
        .collect();
    let xs: Vec<f64> = counts.iter().map(|c| c.scale_exponent as f64).collect();
    let ys: Vec<f64> = counts.iter().map(|c| (c.boxes as f64).log2()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok((sxy / sxx, counts))
}

/// Removed area and box dimension of the depth-`depth` gasket prefractal.
pub fn geometry_report(sys: &IfsSystem, depth: usize) -> Result<GeometryReport> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let (box_dim, counts) = if depth >= 4 { box_dimension(sys, depth.min(14))? } else { (f64::NAN, Vec::new()) };
    let target = (sys.digits().len() as f64).ln() / sys.m()[0].ln();
    Ok(GeometryReport { depth, removed_area: removed_area(depth), removed_area_limit: 0.5, box_dim, box_dim_target: target, counts })
}
