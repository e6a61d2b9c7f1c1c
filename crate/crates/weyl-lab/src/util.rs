//! Small numeric helpers used across the crate: deterministic pairwise
//! summation, unit-circle evaluation, and fixed-precision float formatting.

use num_complex::Complex64;

/// Pairwise (cascade) summation of real samples.
///
/// Splitting the sum recursively keeps the worst-case rounding error at
/// `O(eps * log n)` instead of `O(eps * n)` for left-to-right accumulation,
/// and the result is a pure function of the input order, independent of
/// thread count or chunking decisions made by callers.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BASE: usize = 32;
    if xs.len() <= BASE {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Pairwise summation of complex samples; same contract as [`pairwise_sum`].
pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    const BASE: usize = 32;
    if xs.len() <= BASE {
        let mut acc = Complex64::new(0.0, 0.0);
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

/// `e^{2 pi i x}` for a real phase expressed in cycles.
#[inline]
pub fn e2pi(cycles: f64) -> Complex64 {
    let (s, c) = (2.0 * std::f64::consts::PI * cycles).sin_cos();
    Complex64::new(c, s)
}

/// Format a float with exactly 15 significant digits, `.` decimal separator.
///
/// All human-readable float output (CSV columns, report fields) goes through
/// this so that identical values always print identically.
pub fn fmt_g15(x: f64) -> String {
    if x == 0.0 {
        // Collapse -0.0 so output never depends on the sign of a zero.
        return "0.000000000000000e0".to_string();
    }
    format!("{:.14e}", x)
}

/// Round a float to 15 significant digits (the value that [`fmt_g15`] prints).
///
/// Used before embedding floats in JSON documents so the serialized number
/// carries exactly the printed precision.
pub fn g15(x: f64) -> f64 {
    fmt_g15(x).parse().unwrap_or(x)
}
