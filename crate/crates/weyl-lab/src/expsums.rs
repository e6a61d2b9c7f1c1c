//! Complete and partial Weyl sums, exact band-limited mean-value
//! quadrature, and closed-form minor-arc exponent calculators.
//!
//! The complete sum at a reduced rational `a/q` is
//!
//! ```text
//! S(a/q) = sum_{l=1}^{q} e^{2 pi i l^k a / q},
//! ```
//!
//! evaluated with `l^k a` reduced modulo `q` in exact integer arithmetic
//! before the unit-circle map, so no precision is lost to large powers.
//! The partial sum over a shifted window uses the opposite sign
//! convention matching the multiplier:
//!
//! ```text
//! S_N^-(theta) = sum_{M <= n < M+N} e^{-2 pi i n^k theta},
//! ```
//!
//! with phases reduced by the extended-precision machinery in
//! [`crate::phase`] (treating the floating-point `theta` as the exact
//! dyadic rational it is).
//!
//! The moment integral `int_0^1 |S_{k,X}(alpha)|^{2s} d alpha` is computed
//! *exactly* (up to roundoff in the final complex exponentials and sums)
//! by averaging over `M = s X^k + 1` equispaced points: the integrand is a
//! trigonometric polynomial with frequencies in `[-s X^k, s X^k]`, and
//! equispaced averaging with `M` strictly exceeding the bandwidth
//! annihilates every nonzero frequency, leaving the mean term — which is
//! the integral. This gives a fully independent cross-check of the exact
//! lattice counts in [`crate::arith`].
//!
//! The exponent calculators evaluate the stated minor-arc savings
//! `sigma^(1..3)` for window sums `S_N(theta) = O(N^{1 - sigma})` when
//! `theta` has a Dirichlet witness of height `~ N^{beta_0}`: Weyl
//! differencing gives `sigma^(1) = beta_0 / 2^{k-1}`; Vinogradov-type mean
//! values give `sigma^(2) = max_s (beta_0 - eta(s, k-1))/(2s)` and the
//! refined two-parameter form `sigma^(3)`, valid for `beta_0 > 1 - 1/k`,
//! where `eta(s, k) = k^2 e^{-2 s / k^2}` is the stated best-known decay
//! profile (an approximation, and flagged as such in reports).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{frac_pow_times, pow_mul_mod};
use crate::util::{e2pi, pairwise_sum, pairwise_sum_complex};

/// A fraction `a/q` in lowest terms with `1 <= a <= q`; `1/1` is the
/// canonical representative of the integers (`theta = 0` wraps to `1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedFraction {
    a: u64,
    q: u64,
}

impl ReducedFraction {
    pub fn new(a: u64, q: u64) -> Result<Self> {
        if q == 0 || a == 0 || a > q {
            return Err(Error::invalid(format!(
                "fraction {a}/{q} must satisfy 1 <= a <= q"
            )));
        }
        if num_integer::gcd(a, q) != 1 {
            return Err(Error::invalid(format!("fraction {a}/{q} is not reduced")));
        }
        Ok(ReducedFraction { a, q })
    }

    pub fn numer(&self) -> u64 {
        self.a
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    /// Floating-point value `a/q`.
    pub fn value(&self) -> f64 {
        self.a as f64 / self.q as f64
    }
}

impl std::fmt::Display for ReducedFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.a, self.q)
    }
}

/// Complete Weyl sum `S(a/q) = sum_{l=1}^q e^{2 pi i l^k a/q}`.
///
/// Phases are the exact residues `l^k a mod q`; the only roundoff is in
/// the final unit-circle map and the pairwise summation.
pub fn weyl_sum_complete(frac: ReducedFraction, k: u32) -> Complex64 {
    let q = frac.denom();
    let terms: Vec<Complex64> = (1..=q)
        .map(|l| {
            let r = pow_mul_mod(l, k, frac.numer(), q);
            e2pi(r as f64 / q as f64)
        })
        .collect();
    pairwise_sum_complex(&terms)
}

/// One row of the classical-bound audit: the worst normalized magnitude
/// over all reduced numerators at a fixed denominator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundAuditRow {
    pub q: u64,
    /// Numerator achieving the maximum.
    pub a: u64,
    /// `max_a |S(a/q)|`.
    pub max_magnitude: f64,
    /// `max_a |S(a/q)| / q^{1 - 1/k}`.
    pub ratio: f64,
}

/// Audit the classical bound `S(a/q) = O(q^{1 - 1/k})`: for each
/// `2 <= q <= q_max` report `max_a |S(a/q)| / q^{1-1/k}` over reduced `a`.
/// The ratios should stay bounded (by a slowly growing factor in `q`).
pub fn classical_bound_audit(k: u32, q_max: u64) -> Result<Vec<BoundAuditRow>> {
    if k == 0 {
        return Err(Error::invalid("classical bound audit needs k >= 1"));
    }
    if q_max < 2 {
        return Err(Error::invalid("classical bound audit needs q_max >= 2"));
    }
    let rows: Vec<BoundAuditRow> = (2..=q_max)
        .into_par_iter()
        .map(|q| {
            let mut best = (1u64, 0.0f64);
            for a in 1..q {
                if num_integer::gcd(a, q) != 1 {
                    continue;
                }
                let frac = ReducedFraction { a, q };
                let mag = weyl_sum_complete(frac, k).norm();
                if mag > best.1 {
                    best = (a, mag);
                }
            }
            let scale = (q as f64).powf(1.0 - 1.0 / k as f64);
            BoundAuditRow {
                q,
                a: best.0,
                max_magnitude: best.1,
                ratio: best.1 / scale,
            }
        })
        .collect();
    Ok(rows)
}

/// Partial sum `sum_{m_start <= n < m_start + n_len} e^{-2 pi i n^k theta}`
/// with extended-precision phase reduction (exact with respect to the
/// dyadic rational `theta` actually passed).
pub fn partial_weyl_sum(k: u32, theta: f64, m_start: u64, n_len: u64) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::invalid("partial Weyl sum needs k >= 1"));
    }
    if n_len == 0 {
        return Err(Error::invalid("partial Weyl sum needs a nonempty window"));
    }
    let terms: Vec<Complex64> = (m_start..m_start + n_len)
        .map(|n| e2pi(frac_pow_times(n, k, theta)).conj())
        .collect();
    Ok(pairwise_sum_complex(&terms))
}

/// Cap on the sample count for [`mean_value_quadrature`].
pub const QUADRATURE_SAMPLE_BUDGET: u64 = 1 << 22;

/// Even moment of the finite generating sum: the exact integral
/// `int_0^1 |sum_{n<=x} e^{2 pi i n^k alpha}|^{2s} d alpha`.
///
/// Sampling at `M = s x^k + 1 > bandwidth` equispaced points makes the
/// average equal the integral exactly (band-limited integrand); sample
/// phases are exact residues `(n^k mod M) i mod M`. By Parseval this
/// equals the boxed lattice count from
/// [`crate::arith::lattice_mean_value`], which is the basis of the
/// cross-engine acceptance check.
pub fn mean_value_quadrature(s: u64, k: u32, x: u64) -> Result<f64> {
    if s == 0 || k == 0 || x == 0 {
        return Err(Error::invalid("moment quadrature needs s, k, x >= 1"));
    }
    let xk = crate::arith::pow_checked(x, k)
        .ok_or_else(|| Error::invalid("x^k exceeds the 64-bit sample range"))?;
    let m = s
        .checked_mul(xk)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::invalid("s * x^k + 1 exceeds the 64-bit sample range"))?;
    if m > QUADRATURE_SAMPLE_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "quadrature sample count",
            required: m as u128,
            limit: QUADRATURE_SAMPLE_BUDGET as u128,
        });
    }
    // Residues n^k mod M for n = 1..=x (exact).
    let residues: Vec<u64> = (1..=x)
        .map(|n| crate::phase::pow_mod(n, k as u64, m))
        .collect();
    let samples: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|i| {
            let terms: Vec<Complex64> = residues
                .iter()
                .map(|&r| {
                    let ph = crate::phase::mul_mod(r, i, m);
                    e2pi(ph as f64 / m as f64)
                })
                .collect();
            let mag2 = pairwise_sum_complex(&terms).norm_sqr();
            mag2.powi(s as i32)
        })
        .collect();
    Ok(pairwise_sum(&samples) / m as f64)
}

/// Stated mean-value decay profile `eta(s, k) = k^2 e^{-2 s / k^2}`,
/// an approximation to the best-known exponent loss (flag it as "≈" in
/// any report).
pub fn eta_bound(s: u64, k: u32) -> Result<f64> {
    if s == 0 || k == 0 {
        return Err(Error::invalid("eta profile needs s >= 1 and k >= 1"));
    }
    let k2 = (k as f64) * (k as f64);
    Ok(k2 * (-2.0 * s as f64 / k2).exp())
}

/// Minor-arc exponent bundle: the three savings for
/// `S_N(theta) = O(N^{1 - sigma})` at Dirichlet height `N^{beta_0}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExponentReport {
    pub k: u32,
    pub beta0: f64,
    /// Weyl-differencing saving `beta_0 / 2^{k-1}`.
    pub sigma1: f64,
    /// Mean-value saving `max_s (beta_0 - eta(s, k-1)) / (2s)`.
    pub sigma2: f64,
    /// `s` achieving `sigma2` within the search window.
    pub sigma2_arg_s: u64,
    /// Refined two-parameter saving; only valid for `beta_0 > 1 - 1/k`.
    pub sigma3: Option<f64>,
    /// `r` achieving `sigma3`.
    pub sigma3_arg_r: Option<u64>,
    /// Largest of the available savings.
    pub sigma_max: f64,
    /// Upper end of the `s`/`t` search window used.
    pub window: u64,
}

/// Search window for the `s`/`t` maximizations: the optimizer sits near
/// `2 (k-1)^2 log(k-1)`, comfortably inside `8 k^2 log k`.
fn sigma_window(k: u32) -> u64 {
    let kf = k as f64;
    (8.0 * kf * kf * kf.ln()).ceil().max(64.0) as u64
}

/// Evaluate the three minor-arc savings at degree `k` and Dirichlet
/// height exponent `beta0`.
pub fn sigma_report(k: u32, beta0: f64) -> Result<ExponentReport> {
    if k < 2 {
        return Err(Error::invalid("minor-arc exponents need k >= 2"));
    }
    if !(beta0 > 0.0 && beta0 <= 1.0) {
        return Err(Error::invalid("beta0 must lie in (0, 1]"));
    }
    let window = sigma_window(k);
    let sigma1 = beta0 / f64::powi(2.0, k as i32 - 1);

    let mut sigma2 = f64::NEG_INFINITY;
    let mut sigma2_arg_s = 1;
    for s in 1..=window {
        let v = (beta0 - eta_bound(s, k - 1)?) / (2.0 * s as f64);
        if v > sigma2 {
            sigma2 = v;
            sigma2_arg_s = s;
        }
    }

    let (sigma3, sigma3_arg_r) = if beta0 > 1.0 - 1.0 / k as f64 {
        let kf = k as f64;
        let s_min = ((kf * (kf - 1.0)) / 2.0).ceil() as u64;
        let mut best = f64::NEG_INFINITY;
        let mut best_r = 1;
        for r in 1..=(k as u64 / 2).max(1) {
            let rf = r as f64;
            let mut a = f64::NEG_INFINITY;
            for s in s_min.max(1)..=window.max(s_min + 64) {
                a = a.max((rf - eta_bound(s, k - 1)?) / (2.0 * rf * s as f64));
            }
            let mut b = f64::NEG_INFINITY;
            for t in 1..=window {
                b = b.max((kf - rf * (1.0 + eta_bound(t, k)?)) / (2.0 * t as f64 * kf));
            }
            let v = a.min(b);
            if v > best {
                best = v;
                best_r = r;
            }
        }
        (Some(best), Some(best_r))
    } else {
        (None, None)
    };

    let sigma_max = sigma1.max(sigma2).max(sigma3.unwrap_or(f64::NEG_INFINITY));
    Ok(ExponentReport {
        k,
        beta0,
        sigma1,
        sigma2,
        sigma2_arg_s,
        sigma3,
        sigma3_arg_r,
        sigma_max,
        window,
    })
}
