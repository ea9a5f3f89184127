//! Log-log least squares for convergence-rate measurement.

use crate::error::{Error, Result};

/// Result of fitting `value ≈ C · β^exponent` on a log-log grid.
#[derive(Debug, Clone)]
pub struct RateFit {
    /// Slope of `ln value` against `ln β`.
    pub exponent: f64,
    /// Intercept `ln C`.
    pub log_constant: f64,
    /// Coefficient of determination of the linear fit, in `[0, 1]`.
    pub r_squared: f64,
    pub beta_grid: Vec<f64>,
}

/// Unweighted least squares on `(ln β, ln value)`.
///
/// Requires ≥ 4 strictly increasing grid points spanning at least three
/// decades, and positive values.
pub fn rate_fit(values: &[(f64, f64)]) -> Result<RateFit> {
    if values.len() < 4 {
        return Err(Error::domain("rate_fit", "need at least 4 grid points"));
    }
    for w in values.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::domain(
                "rate_fit",
                "beta grid must be strictly increasing",
            ));
        }
    }
    let span = values.last().unwrap().0 / values.first().unwrap().0;
    if span < 1e3 {
        return Err(Error::domain(
            "rate_fit",
            format!("grid spans {:.2} decades, need ≥ 3", span.log10()),
        ));
    }
    if values.iter().any(|&(b, v)| b <= 0.0 || v <= 0.0) {
        return Err(Error::domain(
            "rate_fit",
            "betas and values must be positive",
        ));
    }

    let pts: Vec<(f64, f64)> = values.iter().map(|&(b, v)| (b.ln(), v.ln())).collect();
    let (slope, intercept, r2) = linear_fit(&pts)?;
    Ok(RateFit {
        exponent: slope,
        log_constant: intercept,
        r_squared: r2,
        beta_grid: values.iter().map(|&(b, _)| b).collect(),
    })
}

/// Plain least squares `y ≈ a·x + b`; returns `(a, b, r²)`.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(Error::domain("linear_fit", "need at least 2 points"));
    }
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let mx = sx / n;
    let my = sy / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("linear_fit", "degenerate abscissae"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok((slope, intercept, r2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let grid: Vec<(f64, f64)> = (0..7)
            .map(|i| {
                let b = 10f64.powi(i + 1);
                (b, 3.7 * b.powf(-1.25))
            })
            .collect();
        let fit = rate_fit(&grid).unwrap();
        assert!((fit.exponent + 1.25).abs() < 1e-12);
        assert!((fit.log_constant - 3.7f64.ln()).abs() < 1e-10);
        assert!(fit.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn constant_series_zero_exponent() {
        let grid: Vec<(f64, f64)> = (0..5).map(|i| (10f64.powi(i + 1), 2.0)).collect();
        let fit = rate_fit(&grid).unwrap();
        assert!(fit.exponent.abs() < 1e-14);
    }

    #[test]
    fn degenerate_grids_rejected() {
        assert!(rate_fit(&[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0)]).is_err());
        assert!(rate_fit(&[(1.0, 1.0), (1.0, 1.0), (3.0, 1.0), (4.0, 1.0)]).is_err());
        assert!(rate_fit(&[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0), (4.0, 1.0)]).is_err());
    }
}
