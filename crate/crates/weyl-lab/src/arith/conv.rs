//! Truncated exact convolution with a selectable engine.
//!
//! Counting tables are built by repeated convolution of sparse indicator
//! vectors, truncated to a fixed window `[0, out_len)`. Two engines produce
//! bit-for-bit identical results:
//!
//! * **schoolbook** — direct double loop over nonzero entries; best when
//!   one factor is very sparse (e.g. a k-th power indicator);
//! * **transform** — multi-prime number-theoretic transforms with exact
//!   residue recombination; best for long dense factors.
//!
//! `Auto` picks between them with a deterministic cost model that depends
//! only on the operand shapes (lengths and nonzero counts), so repeated
//! runs take identical code paths.

use serde::{Deserialize, Serialize};

use crate::arith::ntt;
use crate::count::Count;
use crate::error::{Error, Result};

/// Engine selection for [`convolve_truncated`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ConvMode {
    /// Deterministic shape-based choice between the two engines.
    #[default]
    Auto,
    /// Force the direct nonzero-pair loop.
    Schoolbook,
    /// Force the transform engine (errors if the inputs exceed its
    /// capacity rather than silently switching engines).
    Ntt,
}

/// Output windows below this length never use the transform engine.
pub const NTT_LENGTH_THRESHOLD: usize = 1 << 12;

fn nnz(v: &[Count]) -> usize {
    v.iter().filter(|c| !c.is_zero()).count()
}

fn schoolbook(a: &[Count], b: &[Count], out_len: usize) -> Vec<Count> {
    let mut out = vec![Count::ZERO; out_len];
    // Iterate the sparser factor outermost so each pass over the other
    // factor stays cache-friendly.
    let (outer, inner) = if nnz(a) <= nnz(b) { (a, b) } else { (b, a) };
    for (i, oi) in outer.iter().enumerate() {
        if oi.is_zero() || i >= out_len {
            continue;
        }
        let max_j = (out_len - i).min(inner.len());
        for (j, ij) in inner.iter().enumerate().take(max_j) {
            if ij.is_zero() {
                continue;
            }
            let prod = oi.checked_mul(ij);
            out[i + j] = out[i + j].checked_add(&prod);
        }
    }
    out
}

fn auto_prefers_ntt(a: &[Count], b: &[Count], out_len: usize) -> bool {
    if out_len < NTT_LENGTH_THRESHOLD || !ntt::supports(a, b) {
        return false;
    }
    let full = a.len() + b.len() - 1;
    let padded = full.next_power_of_two() as f64;
    // ~3 transforms of length L per prime, assume three primes for the
    // common (< 96-bit) case; schoolbook cost is the nonzero-pair count.
    let ntt_cost = 3.0 * 3.0 * padded * padded.log2();
    let school_cost = nnz(a) as f64 * nnz(b) as f64;
    school_cost > ntt_cost
}

/// Exact convolution of `a` and `b`, truncated to `out_len` entries.
///
/// Entries at index `>= out_len` of the full product are discarded; the
/// retained prefix is exact regardless of engine.
pub fn convolve_truncated(
    a: &[Count],
    b: &[Count],
    out_len: usize,
    mode: ConvMode,
) -> Result<Vec<Count>> {
    // The product prefix only depends on the input prefixes.
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    if a.is_empty() || b.is_empty() {
        return Ok(vec![Count::ZERO; out_len]);
    }
    match mode {
        ConvMode::Schoolbook => Ok(schoolbook(a, b, out_len)),
        ConvMode::Ntt => ntt::convolve_exact(a, b, out_len).ok_or_else(|| {
            Error::invalid(format!(
                "transform convolution cannot certify exactness for lengths {}x{} \
                 with entries this wide; use schoolbook or auto mode",
                a.len(),
                b.len()
            ))
        }),
        ConvMode::Auto => {
            if auto_prefers_ntt(a, b, out_len) {
                // `supports` was checked by the cost model; the unwrap is
                // a fallback for the impossible case.
                Ok(ntt::convolve_exact(a, b, out_len)
                    .unwrap_or_else(|| schoolbook(a, b, out_len)))
            } else {
                Ok(schoolbook(a, b, out_len))
            }
        }
    }
}
