//! Empirical convergence exponents from `(ε, regret)` sweeps.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("no point has positive eps and regret")]
    NoPositivePoints,
    #[error("need at least 3 usable points, got {0}")]
    TooFewPoints(usize),
    #[error("all eps values are equal")]
    DegeneratePoints,
}

/// Least squares fit of `ln regret = intercept + slope · ln ε`.
///
/// Points with nonpositive `ε` or regret are skipped.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit, RateError> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(e, r)| e > 0.0 && r > 0.0 && e.is_finite() && r.is_finite())
        .map(|&(e, r)| (e.ln(), r.ln()))
        .collect();
    match logs.len() {
        0 => return Err(RateError::NoPositivePoints),
        k if k < 3 => return Err(RateError::TooFewPoints(k)),
        _ => {}
    }
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx <= f64::EPSILON * k * mx.abs().max(1.0) {
        return Err(RateError::DegeneratePoints);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = logs.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let eps = [0.01, 0.02, 0.05, 0.1];
        let lin: Vec<_> = eps.iter().map(|&e| (e, 3.0 * e)).collect();
        let fit = fit_rate(&lin).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        let root: Vec<_> = eps.iter().map(|&e| (e, 2.0 * e.sqrt())).collect();
        assert!((fit_rate(&root).unwrap().slope - 0.5).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert_eq!(fit_rate(&[(0.1, 0.0), (0.2, -1.0)]), Err(RateError::NoPositivePoints));
        assert_eq!(fit_rate(&[(0.1, 1.0), (0.2, 1.0)]), Err(RateError::TooFewPoints(2)));
        assert_eq!(
            fit_rate(&[(0.1, 1.0), (0.1, 2.0), (0.1, 3.0)]),
            Err(RateError::DegeneratePoints)
        );
    }

    #[test]
    fn constant_regret_has_zero_slope() {
        let fit = fit_rate(&[(0.01, 1.0), (0.1, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.r_squared, 1.0);
    }
}
