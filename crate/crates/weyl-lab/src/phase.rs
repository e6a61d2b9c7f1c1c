//! Exact phase reduction for oscillatory sums.
//!
//! Every exponential-sum routine in this crate needs the fractional part of
//! `n^k * theta` to full double precision even when `n^k * theta` is
//! enormous. Computing `n^k` as a float and reducing mod 1 loses all
//! accuracy once `n^k * theta` exceeds 2^53, so reduction is done in integer
//! arithmetic instead:
//!
//! * For a float `theta = m * 2^e` (exact binary expansion of the `f64`),
//!   the product `n^k * m` is formed exactly as an integer, the integer part
//!   is discarded by masking the low `-e` bits, and only then is the result
//!   rounded to a double. The absolute error of the returned fraction is
//!   below 2^-53 regardless of the size of `n^k`.
//! * For a rational `theta = a/q`, the residue `(n^k mod q) * a mod q` is
//!   computed by modular exponentiation, which is exact for any `n`.
//!
//! A `u128` fast path covers the desk-scale range (`n^k * m < 2^127`); the
//! big-integer path takes over beyond that.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Exact binary decomposition of a finite nonnegative `f64`: `x = m * 2^e`.
fn decompose(x: f64) -> (u64, i64) {
    debug_assert!(x.is_finite() && x >= 0.0);
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let exp_raw = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_raw == 0 {
        (frac, -1074) // subnormal
    } else {
        (frac | (1u64 << 52), exp_raw - 1075)
    }
}

/// Fractional part of `x * 2^e` for an exact integer `x`, as a double in [0, 1).
fn frac_of_shifted_u128(x: u128, e: i64) -> f64 {
    if e >= 0 || x == 0 {
        return 0.0; // the product is an integer
    }
    let fb = (-e) as u32; // number of fractional bits
    if fb >= 128 {
        // x * 2^e < 1 unless x has more than 128 bits (excluded by caller).
        let v = x as f64 * (2f64).powi(e as i32);
        return if v >= 1.0 { v.fract() } else { v };
    }
    let masked = if fb == 128 { x } else { x & ((1u128 << fb) - 1) };
    // masked / 2^fb in [0,1); conversion rounds to 53 bits, so the absolute
    // error is below 2^-53.
    let mut v = masked as f64 * (2f64).powi(-(fb as i32));
    if v >= 1.0 {
        v = 0.0; // rounding landed exactly on 1.0; wrap to the circle
    }
    v
}

fn frac_of_shifted_big(x: &BigUint, e: i64) -> f64 {
    if e >= 0 {
        return 0.0;
    }
    let fb = (-e) as u64;
    let bits = x.bits();
    if bits <= fb {
        // Value is already < 1: take the top 64 bits for the mantissa.
        let shift = bits.saturating_sub(64);
        let top = (x >> shift).to_u64().unwrap_or(0);
        let mut v = top as f64 * (2f64).powi((shift as i64 + e) as i32);
        if v >= 1.0 {
            v = 0.0;
        }
        return v;
    }
    let mask_len = fb;
    let masked: BigUint = x & ((BigUint::from(1u32) << mask_len) - 1u32);
    let mbits = masked.bits();
    if mbits == 0 {
        return 0.0;
    }
    // Keep the top <=64 bits of the fractional expansion; dropped bits
    // contribute less than 2^-64 to the result.
    let shift = mbits.saturating_sub(64);
    let top = (&masked >> shift).to_u64().unwrap_or(0);
    let exp = shift as i64 - fb as i64;
    let mut v = top as f64 * (2f64).powi(exp as i32);
    if v >= 1.0 {
        v = 0.0;
    }
    v
}

/// Fractional part of `n^k * theta` in [0, 1), exact integer reduction.
pub fn frac_pow_times(n: u64, k: u32, theta: f64) -> f64 {
    debug_assert!(theta.is_finite() && theta >= 0.0);
    let (m, e) = decompose(theta);
    if m == 0 {
        return 0.0;
    }
    // Try the u128 fast path: need bits(n^k) + bits(m) <= 127.
    let nbits = if n == 0 { 0 } else { 64 - n.leading_zeros() as u64 };
    if nbits * k as u64 + 53 <= 127 {
        let mut p: u128 = 1;
        for _ in 0..k {
            p *= n as u128;
        }
        return frac_of_shifted_u128(p * m as u128, e);
    }
    let p = BigUint::from(n).pow(k) * BigUint::from(m);
    frac_of_shifted_big(&p, e)
}

/// Residue `n^k * a mod q` for an exact rational phase `a/q`.
///
/// The corresponding point on the circle is `residue / q`; all complete
/// Weyl-sum evaluations go through this so rational phases never touch
/// floating point until the final `exp`.
pub fn pow_mul_mod(n: u64, k: u32, a: u64, q: u64) -> u64 {
    debug_assert!(q > 0);
    let t = pow_mod(n % q, k as u64, q);
    mul_mod(t, a % q, q)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc: u64 = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}
