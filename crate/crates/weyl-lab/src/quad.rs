//! Quadrature kernels: Gauss-Legendre panels, a Filon rule for
//! linear-phase oscillatory integrals, and a log-substituted trapezoid for
//! Gamma-type integrals on the half line.
//!
//! Three regimes appear in this crate and each gets the tool that is
//! actually sound there:
//!
//! * Smooth complex integrands over a bounded interval with at most a few
//!   oscillations per panel: composite Gauss-Legendre with a panel count
//!   proportional to the oscillation count (`gl_panels`).
//! * `int g(t) e^{i omega t} dt` with smooth `g` and arbitrary `omega`:
//!   composite Filon with quadratic amplitude interpolation
//!   (`filon_linear_phase`). The error is governed by the interpolation
//!   error of `g`, not by `omega`, so the cost is independent of the
//!   frequency - the property that makes huge-frequency evaluations
//!   feasible at all. Moments `int tau^j e^{i omega tau} dtau` are computed
//!   by the stable upward recursion when `|omega| h >= 1/2` and by Taylor
//!   series below that threshold, where the recursion would cancel
//!   catastrophically.
//! * `int_0^infty e^{-beta y} y^{c-1} dy` with `0 < c < 1`: substituting
//!   `y = e^t` removes the endpoint singularity and leaves an analytic
//!   integrand decaying exponentially on the left and doubly exponentially
//!   on the right, where the trapezoid rule converges geometrically
//!   (`gamma_tail_integral`).

use num_complex::Complex64;

use crate::util::pairwise_sum_complex;

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Legendre recurrence. Exact to machine precision for the
/// small orders used here.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) via the three-term recurrence.
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    nodes[n / 2] = if n % 2 == 1 { 0.0 } else { nodes[n / 2] };
    (nodes, weights)
}

/// Composite Gauss-Legendre integration of a complex integrand.
pub fn gl_panels<F>(f: F, a: f64, b: f64, panels: usize, order: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut parts = Vec::with_capacity(panels);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(&weights) {
            acc += f(mid + 0.5 * h * x) * *w;
        }
        parts.push(acc * (0.5 * h));
    }
    pairwise_sum_complex(&parts)
}

/// Moments `m_j = int_0^h tau^j e^{i omega tau} dtau` for j = 0, 1, 2.
fn filon_moments(omega: f64, h: f64) -> [Complex64; 3] {
    let wh = omega * h;
    if wh.abs() < 0.5 {
        // Taylor series: m_j = sum_r (i omega)^r h^{j+r+1} / (r! (j+r+1)).
        let iw = Complex64::new(0.0, omega);
        let mut m = [Complex64::new(0.0, 0.0); 3];
        for (j, mj) in m.iter_mut().enumerate() {
            let mut term = Complex64::new(h.powi(j as i32 + 1), 0.0);
            let mut acc = term / (j as f64 + 1.0);
            for r in 1..40 {
                term *= iw * h / r as f64;
                let add = term / (j + r + 1) as f64;
                acc += add;
                if add.norm() < 1e-22 * acc.norm().max(1e-300) {
                    break;
                }
            }
            *mj = acc;
        }
        m
    } else {
        let iw = Complex64::new(0.0, omega);
        let e = Complex64::new(0.0, wh).exp();
        let m0 = (e - 1.0) / iw;
        let m1 = (e * h - m0) / iw;
        let m2 = (e * h * h - m1 * 2.0) / iw;
        [m0, m1, m2]
    }
}

/// `int_a^b g(t) e^{i omega t} dt` by composite quadratic Filon on a fixed
/// panel count. Accuracy is limited by how well a parabola tracks `g` on
/// each panel and is uniform in `omega`.
pub fn filon_linear_phase<F>(g: F, a: f64, b: f64, omega: f64, panels: usize) -> Complex64
where
    F: Fn(f64) -> f64,
{
    let h = (b - a) / panels as f64;
    let m = filon_moments(omega, h);
    let mut parts = Vec::with_capacity(panels);
    let mut g_left = g(a);
    for p in 0..panels {
        let t0 = a + p as f64 * h;
        let g0 = g_left;
        let gm = g(t0 + 0.5 * h);
        let g1 = g(t0 + h);
        g_left = g1;
        // Quadratic g(t0 + tau) ~ A + B tau + C tau^2 through the three samples.
        let a_coef = g0;
        let c_coef = (2.0 * (g0 + g1) - 4.0 * gm) / (h * h);
        let b_coef = (g1 - g0) / h - c_coef * h;
        let val = m[0] * a_coef + m[1] * b_coef + m[2] * c_coef;
        let rot = Complex64::new(0.0, omega * t0).exp();
        parts.push(rot * val);
    }
    pairwise_sum_complex(&parts)
}

/// Adaptive wrapper around [`filon_linear_phase`]: panel doubling until two
/// successive refinements agree to `tol` (absolute), starting from
/// `panels0`. Returns the finer value.
pub fn filon_adaptive<F>(g: F, a: f64, b: f64, omega: f64, panels0: usize, tol: f64) -> Complex64
where
    F: Fn(f64) -> f64 + Copy,
{
    let mut panels = panels0.max(16);
    let mut prev = filon_linear_phase(g, a, b, omega, panels);
    loop {
        panels *= 2;
        let next = filon_linear_phase(g, a, b, omega, panels);
        if (next - prev).norm() <= tol || panels >= (1 << 20) {
            return next;
        }
        prev = next;
    }
}

/// `int_0^infty e^{-beta y} y^{c-1} dy` for `beta > 0`, `0 < c < 1`,
/// equal to `Gamma(c) beta^{-c}`. Trapezoid rule after `y = e^t`.
pub fn gamma_tail_integral(beta: f64, c: f64) -> f64 {
    assert!(beta > 0.0 && c > 0.0 && c < 1.0);
    // Integrand in t: exp(c t - beta e^t). Peak at t* = ln(c/beta).
    // Left tail is exp(c t) (cut where it is < 1e-18 relative), right tail
    // dies doubly exponentially (cut where beta e^t > 45).
    let t_lo = (-42.0) / c - beta.ln();
    let t_hi = (45.0 / beta).ln() + 1.0;
    let h = 0.03;
    let n = ((t_hi - t_lo) / h).ceil() as usize;
    let h = (t_hi - t_lo) / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let t = t_lo + i as f64 * h;
        let v = (c * t - beta * t.exp()).exp();
        acc += if i == 0 || i == n { 0.5 * v } else { v };
    }
    acc * h
}
