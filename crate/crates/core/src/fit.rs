//! Log-log regressions used by the decay and stability experiments.

use crate::error::{Error, Result};

/// Straight-line least-squares fit `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    pub points: usize,
}

pub fn least_squares(points: &[(f64, f64)]) -> Result<LineFit> {
    if points.len() < 2 {
        return Err(Error::Domain("need at least two points for a fit".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("degenerate abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(LineFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
        points: points.len(),
    })
}

/// Fits `log|value|` against `log n` over `window = (n_lo, n_hi)` inclusive.
///
/// Requires at least 10 points in the window and strictly positive values.
pub fn decay_fit(series: &[(f64, f64)], window: (f64, f64)) -> Result<LineFit> {
    let mut pts = Vec::new();
    for &(n, v) in series {
        if n < window.0 || n > window.1 {
            continue;
        }
        if !(v > 0.0) || !v.is_finite() || n <= 0.0 {
            return Err(Error::Domain(format!("non-positive value {v} at n = {n}")));
        }
        pts.push((n.ln(), v.ln()));
    }
    if pts.len() < 10 {
        return Err(Error::Domain(format!(
            "decay fit needs >= 10 points in the window, got {}",
            pts.len()
        )));
    }
    least_squares(&pts)
}
