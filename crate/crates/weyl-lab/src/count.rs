//! Exact nonnegative counters with silent promotion to arbitrary precision.
//!
//! Representation counts are held in machine words while they fit and move
//! to heap-allocated big integers only on checked overflow, so the common
//! desk-scale case stays allocation-free while correctness never depends on
//! the magnitude of a count. The representation is canonical: a value that
//! fits in `u64` is always stored in the `Small` variant, which makes
//! derived equality and hashing coincide with numeric equality.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Count {
    Small(u64),
    Big(BigUint),
}

impl Count {
    pub const ZERO: Count = Count::Small(0);
    pub const ONE: Count = Count::Small(1);

    /// Canonicalize: big integers that fit in a word collapse to `Small`.
    pub fn from_biguint(n: BigUint) -> Count {
        match n.to_u64() {
            Some(v) => Count::Small(v),
            None => Count::Big(n),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Count::Small(0))
    }

    pub fn checked_add(&self, other: &Count) -> Count {
        match (self, other) {
            (Count::Small(a), Count::Small(b)) => match a.checked_add(*b) {
                Some(v) => Count::Small(v),
                None => Count::Big(BigUint::from(*a) + BigUint::from(*b)),
            },
            (a, b) => Count::from_biguint(a.to_biguint() + b.to_biguint()),
        }
    }

    pub fn checked_mul(&self, other: &Count) -> Count {
        match (self, other) {
            (Count::Small(a), Count::Small(b)) => match a.checked_mul(*b) {
                Some(v) => Count::Small(v),
                None => Count::Big(BigUint::from(*a) * BigUint::from(*b)),
            },
            (a, b) => Count::from_biguint(a.to_biguint() * b.to_biguint()),
        }
    }

    pub fn squared(&self) -> Count {
        self.checked_mul(self)
    }

    pub fn to_biguint(&self) -> BigUint {
        match self {
            Count::Small(v) => BigUint::from(*v),
            Count::Big(b) => b.clone(),
        }
    }

    /// Nearest-double approximation; exact whenever the count has <= 53 bits.
    pub fn to_f64(&self) -> f64 {
        match self {
            Count::Small(v) => *v as f64,
            Count::Big(b) => b.to_f64().unwrap_or(f64::INFINITY),
        }
    }

    /// Residue modulo a machine-word prime (used by the modular transform).
    pub fn rem_u64(&self, m: u64) -> u64 {
        match self {
            Count::Small(v) => v % m,
            Count::Big(b) => (b % BigUint::from(m)).to_u64().expect("residue fits"),
        }
    }

    /// Bit length of the value (0 for zero).
    pub fn bits(&self) -> u64 {
        match self {
            Count::Small(0) => 0,
            Count::Small(v) => 64 - v.leading_zeros() as u64,
            Count::Big(b) => b.bits(),
        }
    }

    /// Minimal little-endian magnitude bytes (empty for zero).
    ///
    /// This is the canonical on-disk encoding: no trailing zero byte is ever
    /// produced, so every value has exactly one serialized form.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        match self {
            Count::Small(0) => Vec::new(),
            Count::Small(v) => {
                let mut bytes = v.to_le_bytes().to_vec();
                while bytes.last() == Some(&0) {
                    bytes.pop();
                }
                bytes
            }
            Count::Big(b) => b.to_bytes_le(),
        }
    }

    /// Inverse of [`Count::to_le_bytes`]; rejects non-canonical encodings.
    pub fn from_le_bytes(bytes: &[u8]) -> Option<Count> {
        if bytes.is_empty() {
            return Some(Count::ZERO);
        }
        if bytes.last() == Some(&0) {
            return None; // trailing zero byte: not canonical
        }
        Some(Count::from_biguint(BigUint::from_bytes_le(bytes)))
    }

    /// Decimal rendering (counts are printed exactly, never as floats).
    pub fn to_decimal_string(&self) -> String {
        match self {
            Count::Small(v) => v.to_string(),
            Count::Big(b) => b.to_string(),
        }
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Count {
        Count::Small(v)
    }
}

impl From<u128> for Count {
    fn from(v: u128) -> Count {
        match u64::try_from(v) {
            Ok(s) => Count::Small(s),
            Err(_) => Count::Big(BigUint::from(v)),
        }
    }
}

impl Default for Count {
    fn default() -> Count {
        Count::ZERO
    }
}

impl std::fmt::Display for Count {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl serde::Serialize for Count {
    /// Counts serialize as decimal strings so arbitrary-width values
    /// survive JSON readers that truncate large integers.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string())
    }
}

impl<'de> serde::Deserialize<'de> for Count {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Count, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Count;
            fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str("a nonnegative integer or its decimal-string form")
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Count, E> {
                Ok(Count::Small(v))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Count, E> {
                if v.is_empty() || !v.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(E::custom("count strings must be plain decimal digits"));
                }
                let big = v
                    .parse::<BigUint>()
                    .map_err(|e| E::custom(format!("unparseable count: {e}")))?;
                Ok(Count::from_biguint(big))
            }
        }
        deserializer.deserialize_any(V)
    }
}

impl std::iter::Sum<Count> for Count {
    fn sum<I: Iterator<Item = Count>>(iter: I) -> Count {
        let mut acc = BigUint::zero();
        let mut small: u128 = 0;
        for c in iter {
            match c {
                Count::Small(v) => {
                    small += v as u128;
                    if small > u128::from(u64::MAX) << 32 {
                        acc += BigUint::from(small);
                        small = 0;
                    }
                }
                Count::Big(b) => acc += b,
            }
        }
        acc += BigUint::from(small);
        Count::from_biguint(acc)
    }
}
