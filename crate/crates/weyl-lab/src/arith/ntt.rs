//! Exact convolution by number-theoretic transforms with residue
//! recombination.
//!
//! The convolution of two nonnegative integer sequences is computed modulo
//! several word-sized primes of the form `c * 2^v + 1`, each admitting a
//! primitive 2^v-th root of unity, and the exact coefficients are
//! reconstructed from the residues by Garner's mixed-radix algorithm. The
//! prime set is chosen per call from an a-priori coefficient bound
//!
//! ```text
//! max_l c_l <= min(len_a, len_b) * max(a) * max(b)
//! ```
//!
//! so the reconstruction is provably exact, including inputs whose entries
//! already exceed 64 bits. If the bound outgrows the combined prime
//! capacity (or the padded length exceeds what every prime's root order
//! supports), the caller falls back to schoolbook multiplication; exactness
//! is never traded for speed.

use num_bigint::BigUint;

use crate::count::Count;
use crate::phase::{mul_mod, pow_mod};

/// (prime, primitive root); every prime supports transforms up to 2^21.
const PRIMES: [(u64, u64); 6] = [
    (998244353, 3),   // 119 * 2^23 + 1
    (1004535809, 3),  // 479 * 2^21 + 1
    (167772161, 3),   // 5 * 2^25 + 1
    (469762049, 3),   // 7 * 2^26 + 1
    (1224736769, 3),  // 73 * 2^24 + 1
    (754974721, 11),  // 45 * 2^24 + 1
];

/// Longest supported padded transform length (limited by the smallest
/// two-adic valuation in [`PRIMES`]).
pub const MAX_NTT_LEN: usize = 1 << 21;

/// In-place iterative radix-2 transform over Z/p.
fn ntt(a: &mut [u64], p: u64, g: u64, invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod(g, (p - 1) / len as u64, p);
        if invert {
            w_len = pow_mod(w_len, p - 2, p);
        }
        for start in (0..n).step_by(len) {
            let mut w: u64 = 1;
            for i in 0..len / 2 {
                let u = a[start + i];
                let v = mul_mod(a[start + i + len / 2], w, p);
                a[start + i] = if u + v >= p { u + v - p } else { u + v };
                a[start + i + len / 2] = if u >= v { u - v } else { u + p - v };
                w = mul_mod(w, w_len, p);
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = mul_mod(*x, n_inv, p);
        }
    }
}

fn cyclic_convolve_mod(a: &[Count], b: &[Count], padded: usize, p: u64, g: u64) -> Vec<u64> {
    let mut fa = vec![0u64; padded];
    let mut fb = vec![0u64; padded];
    for (i, c) in a.iter().enumerate() {
        fa[i] = c.rem_u64(p);
    }
    for (i, c) in b.iter().enumerate() {
        fb[i] = c.rem_u64(p);
    }
    ntt(&mut fa, p, g, false);
    ntt(&mut fb, p, g, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = mul_mod(*x, *y, p);
    }
    ntt(&mut fa, p, g, true);
    fa
}

/// How many leading primes from [`PRIMES`] cover `need_bits` of headroom;
/// `None` if even the full set is too small.
fn primes_needed(need_bits: u64) -> Option<usize> {
    let mut have = 0.0f64;
    for (m, (p, _)) in PRIMES.iter().enumerate() {
        have += (*p as f64).log2();
        if have >= need_bits as f64 + 1.0 {
            return Some(m + 1);
        }
    }
    None
}

/// A-priori bit bound on the largest convolution coefficient.
pub fn coefficient_bound_bits(a: &[Count], b: &[Count]) -> u64 {
    let max_bits = |v: &[Count]| v.iter().map(Count::bits).max().unwrap_or(0);
    let overlap = a.len().min(b.len()).max(1) as u64;
    max_bits(a) + max_bits(b) + (64 - overlap.leading_zeros() as u64)
}

/// Whether the transform path can handle these inputs exactly.
pub fn supports(a: &[Count], b: &[Count]) -> bool {
    if a.is_empty() || b.is_empty() {
        return true;
    }
    let padded = (a.len() + b.len() - 1).next_power_of_two();
    padded <= MAX_NTT_LEN && primes_needed(coefficient_bound_bits(a, b)).is_some()
}

/// Exact linear convolution, truncated to `out_len` coefficients.
///
/// Returns `None` when the inputs are outside transform capacity; the
/// result is otherwise identical to schoolbook multiplication, entry by
/// entry.
pub fn convolve_exact(a: &[Count], b: &[Count], out_len: usize) -> Option<Vec<Count>> {
    if a.is_empty() || b.is_empty() || out_len == 0 {
        return Some(vec![Count::ZERO; out_len]);
    }
    let full = a.len() + b.len() - 1;
    let padded = full.next_power_of_two();
    if padded > MAX_NTT_LEN {
        return None;
    }
    let m = primes_needed(coefficient_bound_bits(a, b))?;
    let residues: Vec<Vec<u64>> = PRIMES[..m]
        .iter()
        .map(|&(p, g)| cyclic_convolve_mod(a, b, padded, p, g))
        .collect();

    // Garner reconstruction: mixed-radix digits d_j with
    // x = d_0 + p_0 (d_1 + p_1 (d_2 + ...)).
    let mut inv_prefix = vec![1u64; m];
    for j in 1..m {
        let pj = PRIMES[j].0;
        let mut prod = 1u64;
        for &(pi, _) in &PRIMES[..j] {
            prod = mul_mod(prod, pi % pj, pj);
        }
        inv_prefix[j] = pow_mod(prod, pj - 2, pj);
    }

    let n_out = out_len.min(full);
    let mut out = vec![Count::ZERO; out_len];
    let mut digits = vec![0u64; m];
    for (l, slot) in out.iter_mut().enumerate().take(n_out) {
        for j in 0..m {
            let pj = PRIMES[j].0;
            // Partial value x_{j-1} mod p_j from earlier digits.
            let mut x = 0u64;
            for i in (0..j).rev() {
                x = mul_mod(x, PRIMES[i].0 % pj, pj);
                x = (x + digits[i]) % pj;
            }
            let r = residues[j][l];
            let diff = if r >= x { r - x } else { r + pj - x };
            digits[j] = mul_mod(diff, inv_prefix[j], pj);
        }
        // Assemble the exact value from the mixed-radix digits.
        let mut acc = BigUint::from(digits[m - 1]);
        for i in (0..m - 1).rev() {
            acc = acc * PRIMES[i].0 + digits[i];
        }
        *slot = Count::from_biguint(acc);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schoolbook(a: &[Count], b: &[Count], out_len: usize) -> Vec<Count> {
        let mut out = vec![Count::ZERO; out_len];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if i + j >= out_len {
                    break;
                }
                if bj.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].checked_add(&ai.checked_mul(bj));
            }
        }
        out
    }

    #[test]
    fn small_known_product() {
        // (1 + x)^2 = 1 + 2x + x^2.
        let a = vec![Count::Small(1), Count::Small(1)];
        let got = convolve_exact(&a, &a, 3).unwrap();
        assert_eq!(got, vec![Count::Small(1), Count::Small(2), Count::Small(1)]);
    }

    #[test]
    fn matches_schoolbook_on_wide_entries() {
        // Entries near u64::MAX force multi-prime reconstruction with
        // coefficients far beyond 64 bits.
        let a: Vec<Count> = (0..40u64)
            .map(|i| Count::Small(u64::MAX - (i * i) % 977))
            .collect();
        let b: Vec<Count> = (0..33u64).map(|i| Count::Small(u64::MAX - i)).collect();
        let got = convolve_exact(&a, &b, 72).unwrap();
        assert_eq!(got, schoolbook(&a, &b, 72));
    }

    #[test]
    fn matches_schoolbook_past_128_bits() {
        use num_bigint::BigUint;
        // ~80-bit entries: products reach ~162 bits, well past u128, while
        // the a-priori bound still fits the six-prime capacity.
        let big = || Count::Big((BigUint::from(u64::MAX) << 16) + 12345u32);
        let a = vec![big(), Count::Small(3), big()];
        let b = vec![Count::Small(5), big(), big(), Count::Small(1)];
        let got = convolve_exact(&a, &b, 6).unwrap();
        assert_eq!(got, schoolbook(&a, &b, 6));
        assert!(got.iter().any(|c| c.bits() > 128));
    }

    #[test]
    fn capacity_overflow_is_reported_not_mangled() {
        use num_bigint::BigUint;
        // ~128-bit entries push the bound past the prime capacity; the
        // transform must decline rather than return wrong values.
        let huge = || Count::Big(BigUint::from(u64::MAX) * BigUint::from(u64::MAX));
        let a = vec![huge(); 4];
        assert!(convolve_exact(&a, &a, 8).is_none());
        assert!(!supports(&a, &a));
    }

    #[test]
    fn truncation_matches_full_product_prefix() {
        let a: Vec<Count> = (1..=17u64).map(Count::Small).collect();
        let b: Vec<Count> = (1..=9u64).map(|i| Count::Small(i * 31)).collect();
        let full = convolve_exact(&a, &b, 25).unwrap();
        let cut = convolve_exact(&a, &b, 7).unwrap();
        assert_eq!(&full[..7], &cut[..]);
    }
}
