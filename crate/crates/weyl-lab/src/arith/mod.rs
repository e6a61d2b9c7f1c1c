//! Exact counting of representations by sums of k-th powers.
//!
//! The central object is the table `r_{s,k}(l)` = number of ordered tuples
//! `(n_1, ..., n_s)` of positive integers with `n_1^k + ... + n_s^k = l`,
//! optionally with every part bounded by a cap `X`. Tables are built by
//! repeated truncated convolution of the k-th-power indicator vector, so
//! every entry is exact (arbitrary precision, see [`crate::count::Count`]).
//!
//! On top of the table sit several derived quantities used throughout the
//! crate:
//!
//! * `mean_value_sum(s, k, N)` — the second moment `sum_{l<=N} r(l)^2`,
//!   which counts solutions of the symmetric equation
//!   `n_1^k + ... + n_s^k = m_1^k + ... + m_s^k <= N`;
//! * `lattice_mean_value(s, k, X)` — the same count with all `2s`
//!   variables confined to the box `[1, X]`, the quantity whose growth in
//!   `X` distinguishes diagonal-dominated from genuinely arithmetic
//!   behaviour;
//! * `diagonal_count(s, X)` — solutions where the two sides agree as
//!   multisets, the universal lower bound of order `X^s`;
//! * `vinogradov_count(s, k, X)` — solutions of the full power system
//!   `sum n_i^j = sum m_i^j` for every `j = 1..=k` simultaneously.
//!
//! All counting paths are exact; budgets reject requests whose table or
//! enumeration size would be unreasonable rather than degrade silently.

pub mod conv;
pub mod ntt;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use conv::{convolve_truncated, ConvMode, NTT_LENGTH_THRESHOLD};
pub use ntt::MAX_NTT_LEN;

use crate::count::Count;
use crate::error::{Error, Result};

/// Hard cap on table length (`n_max + 1` entries).
pub const MAX_TABLE_LEN: usize = 1 << 22;

/// Cap on the number of multisets enumerated by [`diagonal_count`].
pub const DIAGONAL_ENUM_BUDGET: u128 = 50_000_000;

/// Cap on the number of ordered tuples enumerated by [`vinogradov_count`].
pub const TUPLE_ENUM_BUDGET: u128 = 1 << 25;

/// `floor(n^(1/k))`, exact: the returned `r` satisfies
/// `r^k <= n < (r+1)^k` by construction.
pub fn integer_kth_root(n: u64, k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::invalid("k-th root needs k >= 1"));
    }
    if k == 1 || n <= 1 {
        return Ok(n);
    }
    // Float guess, then correct by exact integer comparison; the guess is
    // within 1 of the truth for all u64 inputs.
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && pow_checked(r, k).map_or(true, |p| p > n) {
        r -= 1;
    }
    while pow_checked(r + 1, k).map_or(false, |p| p <= n) {
        r += 1;
    }
    Ok(r)
}

/// `n^k` if it fits in a `u64`.
pub fn pow_checked(n: u64, k: u32) -> Option<u64> {
    n.checked_pow(k)
}

/// Exact table of `r_{s,k}(l)` for `0 <= l <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    /// Number of parts in each representation.
    pub s: u64,
    /// Power to which parts are raised.
    pub k: u32,
    /// Largest part allowed, if restricted.
    pub part_bound: Option<u64>,
    /// `counts[l]` is the exact representation count of `l`.
    counts: Vec<Count>,
}

impl CountTable {
    /// Largest represented integer (`counts` covers `0..=n_max`).
    pub fn n_max(&self) -> u64 {
        (self.counts.len() - 1) as u64
    }

    /// The full table, indexed by the represented integer.
    pub fn counts(&self) -> &[Count] {
        &self.counts
    }

    /// Count for a single value, zero outside the window.
    pub fn get(&self, l: u64) -> Count {
        self.counts
            .get(l as usize)
            .cloned()
            .unwrap_or(Count::ZERO)
    }

    /// Exact sum of all entries: the number of tuples whose power sum
    /// lands inside the window.
    pub fn total(&self) -> Count {
        self.counts.iter().cloned().sum()
    }

    /// Exact sum of squared entries (the second moment of the table).
    pub fn sum_of_squares(&self) -> Count {
        self.counts.iter().map(Count::squared).sum()
    }

    /// Rebuild a table from raw parts (cache deserialization path).
    pub fn from_parts(s: u64, k: u32, part_bound: Option<u64>, counts: Vec<Count>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::invalid("count table must cover at least l = 0"));
        }
        Ok(CountTable {
            s,
            k,
            part_bound,
            counts,
        })
    }
}

/// Indicator vector of k-th powers `n^k <= n_max` with `n <= part_cap`,
/// as a table slice of length `n_max + 1`.
fn power_indicator(k: u32, n_max: u64, part_cap: u64) -> Vec<Count> {
    let mut e = vec![Count::ZERO; n_max as usize + 1];
    let mut n = 1u64;
    while n <= part_cap {
        match pow_checked(n, k) {
            Some(p) if p <= n_max => e[p as usize] = Count::Small(1),
            _ => break,
        }
        n += 1;
    }
    e
}

/// Build the exact representation-count table `r_{s,k}(l)`, `l <= n_max`.
///
/// `part_bound` restricts every part to `n_i <= part_bound`; `None` lets
/// parts range over all positive integers (only those with `n^k <= n_max`
/// can contribute).
pub fn representation_counts(
    s: u64,
    k: u32,
    n_max: u64,
    part_bound: Option<u64>,
    mode: ConvMode,
) -> Result<CountTable> {
    if s == 0 {
        return Err(Error::invalid("representation counts need s >= 1 parts"));
    }
    if k == 0 {
        return Err(Error::invalid("representation counts need k >= 1"));
    }
    if part_bound == Some(0) {
        return Err(Error::invalid("part bound must be >= 1 when present"));
    }
    let len = (n_max as u128) + 1;
    if len > MAX_TABLE_LEN as u128 {
        return Err(Error::BudgetExceeded {
            what: "count table length",
            required: len,
            limit: MAX_TABLE_LEN as u128,
        });
    }
    let root = integer_kth_root(n_max, k)?;
    let cap = part_bound.map_or(root, |b| b.min(root));
    let e = power_indicator(k, n_max, cap);
    let mut acc = e.clone();
    for _ in 1..s {
        acc = convolve_truncated(&acc, &e, n_max as usize + 1, mode)?;
    }
    Ok(CountTable {
        s,
        k,
        part_bound,
        counts: acc,
    })
}

/// Exact count of solutions to
/// `n_1^k + ... + n_s^k = m_1^k + ... + m_s^k <= n_max`
/// in positive integers: the second moment `sum_{l<=n_max} r_{s,k}(l)^2`.
pub fn mean_value_sum(s: u64, k: u32, n_max: u64, mode: ConvMode) -> Result<Count> {
    Ok(representation_counts(s, k, n_max, None, mode)?.sum_of_squares())
}

/// Exact count of solutions to the symmetric equation with all `2s`
/// variables in the box `[1, x]`; the window `n_max = s * x^k` captures
/// every achievable power sum.
pub fn lattice_mean_value(s: u64, k: u32, x: u64, mode: ConvMode) -> Result<Count> {
    if s == 0 || k == 0 || x == 0 {
        return Err(Error::invalid("box-constrained mean value needs s, k, x >= 1"));
    }
    let xk = pow_checked(x, k)
        .ok_or_else(|| Error::invalid("x^k exceeds the 64-bit table index range"))?;
    let n_max = s
        .checked_mul(xk)
        .ok_or_else(|| Error::invalid("s * x^k exceeds the 64-bit table index range"))?;
    let len = (n_max as u128) + 1;
    if len > MAX_TABLE_LEN as u128 {
        return Err(Error::BudgetExceeded {
            what: "count table length",
            required: len,
            limit: MAX_TABLE_LEN as u128,
        });
    }
    Ok(representation_counts(s, k, n_max, Some(x), mode)?.sum_of_squares())
}

/// Number of multisets of size `s` from `[1, x]`, used as the enumeration
/// budget for [`diagonal_count`]: `C(x + s - 1, s)`.
fn multiset_count(s: u64, x: u64) -> Option<u128> {
    // Multiplicative binomial evaluation with overflow checks.
    let mut acc: u128 = 1;
    for i in 0..s {
        let num = (x as u128).checked_add(i as u128)?;
        acc = acc.checked_mul(num)?;
        acc /= (i + 1) as u128; // exact: product of j consecutive integers is divisible by j!
        if acc > DIAGONAL_ENUM_BUDGET * 2 {
            return Some(acc); // already over any budget; avoid pointless overflow risk
        }
    }
    Some(acc)
}

/// Exact number of "diagonal" solutions: ordered pairs of tuples
/// `(n_1..n_s), (m_1..m_s)` from `[1, x]` that agree as multisets. Equals
/// `sum over multisets (s! / prod multiplicity_i!)^2` and grows like
/// `x^s`, providing the universal lower bound for every mean value.
pub fn diagonal_count(s: u64, x: u64) -> Result<Count> {
    if s == 0 || x == 0 {
        return Err(Error::invalid("diagonal count needs s >= 1 and x >= 1"));
    }
    let multisets = multiset_count(s, x).unwrap_or(u128::MAX);
    if multisets > DIAGONAL_ENUM_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "diagonal multiset enumeration",
            required: multisets,
            limit: DIAGONAL_ENUM_BUDGET,
        });
    }

    // s! and multiplicity factorials in u128 are exact through s = 34;
    // larger s only passes the budget for tiny x, where the recursion
    // visits few leaves, so a big-integer weight path covers the rest.
    fn factorial_u128(n: u64) -> Option<u128> {
        let mut acc: u128 = 1;
        for i in 2..=n as u128 {
            acc = acc.checked_mul(i)?;
        }
        Some(acc)
    }

    fn weight_squared(s: u64, mults: &[u64]) -> Count {
        if let Some(sf) = factorial_u128(s) {
            let mut denom: u128 = 1;
            let mut ok = true;
            for &m in mults {
                match factorial_u128(m).and_then(|f| denom.checked_mul(f)) {
                    Some(d) => denom = d,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Count::from(sf / denom).squared();
            }
        }
        // Arbitrary-precision fallback for very large s.
        use num_bigint::BigUint;
        let mut num = BigUint::from(1u32);
        for i in 2..=s {
            num *= i;
        }
        let mut den = BigUint::from(1u32);
        for &m in mults {
            for i in 2..=m {
                den *= i;
            }
        }
        Count::from_biguint(&num / &den).squared()
    }

    fn go(next: u64, x: u64, remaining: u64, s: u64, mults: &mut Vec<u64>, acc: &mut Count) {
        if remaining == 0 {
            *acc = acc.checked_add(&weight_squared(s, mults));
            return;
        }
        if next > x {
            return;
        }
        for v in next..=x {
            for m in 1..=remaining {
                mults.push(m);
                go(v + 1, x, remaining - m, s, mults, acc);
                mults.pop();
            }
        }
    }

    let mut acc = Count::ZERO;
    let mut mults = Vec::with_capacity(s as usize);
    go(1, x, s, s, &mut mults, &mut acc);
    Ok(acc)
}

/// Exact number of solutions of the simultaneous power system
/// `n_1^j + ... + n_s^j = m_1^j + ... + m_s^j` for every `j = 1..=k`,
/// with all variables in `[1, x]`. Computed by exact enumeration of all
/// `x^s` tuples bucketed by their power-sum vector.
pub fn vinogradov_count(s: u64, k: u32, x: u64) -> Result<Count> {
    if s == 0 || k == 0 || x == 0 {
        return Err(Error::invalid("power-system count needs s, k, x >= 1"));
    }
    let tuples = (1..=s).try_fold(1u128, |acc, _| acc.checked_mul(x as u128));
    let tuples = tuples.unwrap_or(u128::MAX);
    if tuples > TUPLE_ENUM_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "ordered tuple enumeration",
            required: tuples,
            limit: TUPLE_ENUM_BUDGET,
        });
    }
    // Power sums must stay exact in u64: s * x^k <= u64::MAX.
    let xk = pow_checked(x, k)
        .ok_or_else(|| Error::invalid("x^k exceeds the 64-bit power-sum range"))?;
    s.checked_mul(xk)
        .ok_or_else(|| Error::invalid("s * x^k exceeds the 64-bit power-sum range"))?;

    let mut buckets: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut tuple = vec![1u64; s as usize];
    loop {
        let mut key = Vec::with_capacity(k as usize);
        for j in 1..=k {
            key.push(tuple.iter().map(|&n| pow_checked(n, j).unwrap()).sum());
        }
        *buckets.entry(key).or_insert(0) += 1;

        // Odometer increment over [1, x]^s.
        let mut pos = tuple.len();
        loop {
            if pos == 0 {
                // All tuples visited: sum of squared bucket sizes.
                return Ok(buckets
                    .values()
                    .map(|&m| Count::Small(m).squared())
                    .sum());
            }
            pos -= 1;
            if tuple[pos] < x {
                tuple[pos] += 1;
                for t in &mut tuple[pos + 1..] {
                    *t = 1;
                }
                break;
            }
        }
    }
}
