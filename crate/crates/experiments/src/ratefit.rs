//! Log-log rate fitting for scaling diagnostics.
//!
//! Every scaling claim in the studies ("grows like a power of the block
//! scale", "shrinks with ε") is reduced to ordinary least squares on
//! (log x, log y) with a slope standard error, so tables can report a rate
//! and its uncertainty instead of a bare eyeball trend.

use phi4_core::error::{Error, Result};

/// Least-squares power-law fit `y ≈ e^intercept · x^slope`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// Fitted exponent.
    pub slope: f64,
    /// Fitted log-prefactor.
    pub intercept: f64,
    /// Coefficient of determination in log space; 1 for an exact power law.
    pub r_squared: f64,
    /// Standard error of the slope (residual-based, dof = n − 2).
    pub slope_se: f64,
    /// Residual degrees of freedom.
    pub dof: usize,
}

/// Fit a power law through positive points by OLS on logs.
pub fn rate_fit(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "rate fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    for &(x, y) in points {
        if !(x > 0.0) || !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rate fit needs positive finite points, got ({x}, {y})"
            )));
        }
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx = logs.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let sxy = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(
            "rate fit needs at least two distinct abscissae".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot = logs.iter().map(|p| (p.1 - my).powi(2)).sum::<f64>();
    let ss_err = logs
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>();
    // Constant data is fit exactly by the zero slope: report r² = 1.
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_err / ss_tot };
    let dof = points.len().saturating_sub(2);
    let slope_se = if dof == 0 {
        f64::INFINITY
    } else {
        (ss_err / dof as f64 / sxx).sqrt()
    };
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        slope_se,
        dof,
    })
}
