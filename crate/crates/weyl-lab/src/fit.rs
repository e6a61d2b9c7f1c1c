//! Log-log least-squares fitting of empirical growth exponents.
//!
//! Many audits in this crate reduce to "does this sequence grow like
//! `N^beta`?"; the slope of a least-squares line through
//! `(log N, log value)` estimates `beta`, and the residual diagnostics
//! tell whether a power law is a reasonable description at all.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Result of a power-law fit `value ~ C * N^slope`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FitResult {
    /// Fitted exponent (slope in log-log coordinates).
    pub slope: f64,
    /// `log C` (intercept in log-log coordinates).
    pub intercept: f64,
    /// Coefficient of determination of the log-log regression.
    pub r_squared: f64,
    /// Largest absolute log-scale residual.
    pub max_residual: f64,
    /// Number of points fitted.
    pub n_points: usize,
}

/// Least-squares slope/intercept on `(log N, log value)`.
///
/// Requires at least 4 points with strictly increasing positive abscissae
/// and positive values.
pub fn growth_exponent_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 4 {
        return Err(Error::invalid("growth fit needs at least 4 points"));
    }
    for w in points.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::invalid("growth fit abscissae must strictly increase"));
        }
    }
    if points.iter().any(|&(n, v)| n <= 0.0 || v <= 0.0 || !v.is_finite()) {
        return Err(Error::invalid("growth fit needs positive finite data"));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    let mut max_residual = 0.0f64;
    for (x, y) in xs.iter().zip(&ys) {
        let r = y - (intercept + slope * x);
        ss_res += r * r;
        ss_tot += (y - mean_y).powi(2);
        max_residual = max_residual.max(r.abs());
    }
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res > 0.0 {
        0.0
    } else {
        1.0
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        max_residual,
        n_points: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_recovers_slope() {
        let pts: Vec<(f64, f64)> = (1..=8).map(|i| (i as f64, (i as f64).powi(2))).collect();
        let fit = growth_exponent_fit(&pts).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-9);
        assert!(fit.r_squared > 1.0 - 1e-12);
        assert!(fit.max_residual < 1e-9);
    }

    #[test]
    fn noisy_power_law_stays_close() {
        // Deterministic +-1% ripple around C * N^{1.5}.
        let pts: Vec<(f64, f64)> = (1..=12)
            .map(|i| {
                let n = 2f64.powi(i);
                let noise = 1.0 + 0.01 * if i % 2 == 0 { 1.0 } else { -1.0 };
                (n, 3.7 * n.powf(1.5) * noise)
            })
            .collect();
        let fit = growth_exponent_fit(&pts).unwrap();
        assert!((fit.slope - 1.5).abs() < 0.05, "slope {}", fit.slope);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(growth_exponent_fit(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(growth_exponent_fit(&[(1.0, 1.0), (2.0, 2.0), (2.0, 3.0), (4.0, 4.0)]).is_err());
        assert!(growth_exponent_fit(&[(1.0, 1.0), (2.0, -2.0), (3.0, 3.0), (4.0, 4.0)]).is_err());
    }
}
