//! Independent brute-force oracles for the integration tests. These
//! deliberately avoid the library's convolution machinery: counts come
//! from direct tuple enumeration, sums from naive floating point.

use num_complex::Complex64;

/// Count ordered s-tuples of positive integers (each at most
/// `part_bound` when given) whose k-th powers sum to each `l <= n_max`,
/// by plain nested enumeration.
pub fn brute_force_counts(s: u64, k: u32, n_max: u64, part_bound: Option<u64>) -> Vec<u64> {
    let mut counts = vec![0u64; n_max as usize + 1];
    let mut parts: Vec<u64> = Vec::new();
    for m in 1u64.. {
        let p = m.checked_pow(k);
        match p {
            Some(p) if p <= n_max && part_bound.map_or(true, |b| m <= b) => parts.push(p),
            _ => break,
        }
    }
    fn rec(depth: u64, acc: u64, parts: &[u64], n_max: u64, counts: &mut [u64]) {
        if depth == 0 {
            counts[acc as usize] += 1;
            return;
        }
        for &p in parts {
            if acc + p > n_max {
                break;
            }
            rec(depth - 1, acc + p, parts, n_max, counts);
        }
    }
    rec(s, 0, &parts, n_max, &mut counts);
    counts
}

/// Naive complete Weyl sum at a rational point, no modular reduction.
pub fn naive_weyl_sum(a: u64, q: u64, k: u32) -> Complex64 {
    (1..=q)
        .map(|l| {
            let phase = 2.0 * std::f64::consts::PI * (l as f64).powi(k as i32) * a as f64
                / q as f64;
            Complex64::new(phase.cos(), phase.sin())
        })
        .sum()
}

