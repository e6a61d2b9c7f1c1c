//! On-disk codec for representation-count tables.
//!
//! Binary layout (all integers little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "WLCT"
//! 4       2     version (currently 1)
//! 6       8     s, parts per representation (u64)
//! 14      8     k, power of each part (u64)
//! 22      8     n_max, largest tabulated integer (u64)
//! 30      8     part bound (u64; 0 means unbounded)
//! 38      ...   n_max + 1 records: u32 byte length, then the count's
//!               minimal little-endian magnitude bytes
//! ```
//!
//! Every count has exactly one canonical encoding (no trailing zero
//! byte), so equal tables are byte-identical on disk and decode
//! rejects any non-canonical or truncated stream.

use std::path::Path;

use crate::arith::{CountTable, MAX_TABLE_LEN};
use crate::count::Count;
use crate::error::{Error, Result};

pub const TABLE_MAGIC: [u8; 4] = *b"WLCT";
pub const TABLE_VERSION: u16 = 1;

/// Hard cap on a single count record (a few thousand bits covers any
/// table this library can build; anything longer is corruption).
const MAX_RECORD_BYTES: u32 = 1 << 20;

const HEADER_BYTES: usize = 4 + 2 + 8 * 4;

/// Serialize a table to the canonical byte stream.
pub fn encode_table(table: &CountTable) -> Vec<u8> {
    let counts = table.counts();
    let mut out = Vec::with_capacity(HEADER_BYTES + 9 * counts.len());
    out.extend_from_slice(&TABLE_MAGIC);
    out.extend_from_slice(&TABLE_VERSION.to_le_bytes());
    out.extend_from_slice(&table.s.to_le_bytes());
    out.extend_from_slice(&(table.k as u64).to_le_bytes());
    out.extend_from_slice(&table.n_max().to_le_bytes());
    out.extend_from_slice(&table.part_bound.unwrap_or(0).to_le_bytes());
    for c in counts {
        let bytes = c.to_le_bytes();
        out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
        out.extend_from_slice(&bytes);
    }
    out
}

fn corrupt(detail: impl Into<String>) -> Error {
    Error::CorruptTable(detail.into())
}

fn take<'a>(bytes: &mut &'a [u8], n: usize, what: &str) -> Result<&'a [u8]> {
    if bytes.len() < n {
        return Err(corrupt(format!(
            "truncated stream: needed {n} bytes for {what}, found {}",
            bytes.len()
        )));
    }
    let (head, rest) = bytes.split_at(n);
    *bytes = rest;
    Ok(head)
}

fn take_u64(bytes: &mut &[u8], what: &str) -> Result<u64> {
    Ok(u64::from_le_bytes(take(bytes, 8, what)?.try_into().unwrap()))
}

/// Decode and validate a canonical byte stream.
pub fn decode_table(bytes: &[u8]) -> Result<CountTable> {
    let mut rest = bytes;
    let magic = take(&mut rest, 4, "magic")?;
    if magic != TABLE_MAGIC {
        return Err(corrupt("bad magic: not a count-table file"));
    }
    let version = u16::from_le_bytes(take(&mut rest, 2, "version")?.try_into().unwrap());
    if version != TABLE_VERSION {
        return Err(corrupt(format!(
            "unsupported version {version} (expected {TABLE_VERSION})"
        )));
    }
    let s = take_u64(&mut rest, "s")?;
    let k = take_u64(&mut rest, "k")?;
    let n_max = take_u64(&mut rest, "n_max")?;
    let part_bound = take_u64(&mut rest, "part bound")?;
    if s == 0 {
        return Err(corrupt("s must be at least 1"));
    }
    if k == 0 || k > u32::MAX as u64 {
        return Err(corrupt("k out of range"));
    }
    let len = n_max
        .checked_add(1)
        .filter(|&l| l <= MAX_TABLE_LEN as u64)
        .ok_or_else(|| corrupt("table length exceeds the builder cap"))?;
    let mut counts = Vec::with_capacity(len as usize);
    for l in 0..len {
        let rec_len =
            u32::from_le_bytes(take(&mut rest, 4, "record length")?.try_into().unwrap());
        if rec_len > MAX_RECORD_BYTES {
            return Err(corrupt(format!("record {l} claims {rec_len} bytes")));
        }
        let rec = take(&mut rest, rec_len as usize, "record payload")?;
        let count = Count::from_le_bytes(rec)
            .ok_or_else(|| corrupt(format!("record {l} is not in canonical form")))?;
        counts.push(count);
    }
    if !rest.is_empty() {
        return Err(corrupt(format!(
            "{} trailing bytes after the last record",
            rest.len()
        )));
    }
    CountTable::from_parts(
        s,
        k as u32,
        if part_bound == 0 { None } else { Some(part_bound) },
        counts,
    )
}

/// Write a table to a file (plain write; callers wanting atomicity
/// write to a temporary file and rename).
pub fn write_table(path: &Path, table: &CountTable) -> Result<()> {
    Ok(std::fs::write(path, encode_table(table))?)
}

/// Read and validate a table file.
pub fn read_table(path: &Path) -> Result<CountTable> {
    decode_table(&std::fs::read(path)?)
}

/// Render a table as `l,count` CSV with exact decimal counts.
pub fn table_to_csv(table: &CountTable) -> String {
    let mut out = String::from("l,count\n");
    for (l, c) in table.counts().iter().enumerate() {
        out.push_str(&format!("{l},{}\n", c.to_decimal_string()));
    }
    out
}
