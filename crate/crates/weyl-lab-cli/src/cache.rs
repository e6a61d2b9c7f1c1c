//! Count-table cache: one canonical WLCT file per (s, k, N, part bound)
//! key, guarded by an advisory file lock (single writer, many readers).
//! A file that fails decoding or carries the wrong key is quarantined —
//! renamed to `<name>.corrupt` — and reported as corruption so the
//! process can exit with the dedicated status code.

use std::fs::{File, OpenOptions};
use std::os::fd::AsRawFd;
use std::path::{Path, PathBuf};

use weyl_lab::arith::CountTable;
use weyl_lab::table_io::{decode_table, encode_table};
use weyl_lab::{Error, Result};

pub struct TableCache {
    dir: PathBuf,
}

fn flock(file: &File, op: libc::c_int) -> std::io::Result<()> {
    if unsafe { libc::flock(file.as_raw_fd(), op) } == 0 {
        Ok(())
    } else {
        Err(std::io::Error::last_os_error())
    }
}

impl TableCache {
    pub fn open(dir: &Path) -> Result<TableCache> {
        std::fs::create_dir_all(dir)?;
        Ok(TableCache {
            dir: dir.to_path_buf(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn entry_path(&self, s: u64, k: u32, n_max: u64, part_bound: Option<u64>) -> PathBuf {
        self.dir.join(format!(
            "r-s{s}-k{k}-n{n_max}-b{}.wlct",
            part_bound.unwrap_or(0)
        ))
    }

    /// The advisory lock guarding this cache directory (shared for
    /// reads, exclusive for writes; released when the handle drops).
    fn lock(&self, exclusive: bool) -> Result<File> {
        let file = OpenOptions::new()
            .create(true)
            .write(true)
            .open(self.dir.join(".lock"))?;
        flock(
            &file,
            if exclusive {
                libc::LOCK_EX
            } else {
                libc::LOCK_SH
            },
        )?;
        Ok(file)
    }

    fn quarantine(&self, path: &Path, detail: String) -> Error {
        let mut target = path.as_os_str().to_owned();
        target.push(".corrupt");
        match std::fs::rename(path, &target) {
            Ok(()) => Error::CorruptTable(format!(
                "{detail}; quarantined {} to {}",
                path.display(),
                Path::new(&target).display()
            )),
            Err(e) => Error::CorruptTable(format!(
                "{detail}; quarantine of {} failed: {e}",
                path.display()
            )),
        }
    }

    /// Look up a cached table. `Ok(None)` means a clean miss; a file
    /// that exists but fails validation is quarantined and surfaced as
    /// `CorruptTable`.
    pub fn load(
        &self,
        s: u64,
        k: u32,
        n_max: u64,
        part_bound: Option<u64>,
    ) -> Result<Option<CountTable>> {
        let path = self.entry_path(s, k, n_max, part_bound);
        let bytes = {
            let _lock = self.lock(false)?;
            match std::fs::read(&path) {
                Ok(bytes) => bytes,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
                Err(e) => return Err(e.into()),
            }
        };
        match decode_table(&bytes) {
            Ok(table) => {
                if table.s != s
                    || table.k != k
                    || table.n_max() != n_max
                    || table.part_bound != part_bound
                {
                    return Err(self.quarantine(
                        &path,
                        "cache entry does not match its file name".to_string(),
                    ));
                }
                Ok(Some(table))
            }
            Err(Error::CorruptTable(detail)) => Err(self.quarantine(&path, detail)),
            Err(other) => Err(other),
        }
    }

    /// Store a table under its key, atomically, holding the exclusive
    /// lock. Returns the entry path.
    pub fn store(&self, table: &CountTable) -> Result<PathBuf> {
        let path = self.entry_path(table.s, table.k, table.n_max(), table.part_bound);
        let bytes = encode_table(table);
        {
            let _lock = self.lock(true)?;
            crate::output::atomic_write(&path, &bytes)?;
        }
        Ok(path)
    }

    /// Serialize-then-deserialize through the cache; the result must be
    /// identical to the input (checked exactly here).
    pub fn roundtrip(&self, table: &CountTable) -> Result<CountTable> {
        self.store(table)?;
        let back = self
            .load(table.s, table.k, table.n_max(), table.part_bound)?
            .ok_or_else(|| Error::CorruptTable("stored entry vanished".to_string()))?;
        if back.counts() != table.counts() {
            return Err(Error::CorruptTable(
                "cache roundtrip changed the table".to_string(),
            ));
        }
        Ok(back)
    }

    /// Manual eviction: remove every cache entry (including quarantined
    /// files); returns how many files were deleted.
    pub fn clear(&self) -> Result<usize> {
        let _lock = self.lock(true)?;
        let mut removed = 0;
        for entry in std::fs::read_dir(&self.dir)? {
            let path = entry?.path();
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if name.ends_with(".wlct") || name.ends_with(".corrupt") {
                std::fs::remove_file(&path)?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use weyl_lab::arith::{conv::ConvMode, representation_counts};

    #[test]
    fn miss_store_load_clear() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::open(dir.path()).unwrap();
        assert!(cache.load(2, 3, 100, None).unwrap().is_none());
        let table = representation_counts(2, 3, 100, None, ConvMode::Auto).unwrap();
        cache.store(&table).unwrap();
        let back = cache.load(2, 3, 100, None).unwrap().unwrap();
        assert_eq!(back.counts(), table.counts());
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.load(2, 3, 100, None).unwrap().is_none());
    }

    #[test]
    fn corrupt_entry_is_quarantined() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::open(dir.path()).unwrap();
        let table = representation_counts(1, 2, 50, None, ConvMode::Auto).unwrap();
        let path = cache.store(&table).unwrap();
        // Truncate the file mid-record.
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        let err = cache.load(1, 2, 50, None).unwrap_err();
        assert!(matches!(err, Error::CorruptTable(_)), "{err}");
        assert!(!path.exists());
        let quarantined = PathBuf::from(format!("{}.corrupt", path.display()));
        assert!(quarantined.exists());
        // After quarantine the key reads as a clean miss.
        assert!(cache.load(1, 2, 50, None).unwrap().is_none());
    }

    #[test]
    fn mislabeled_entry_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::open(dir.path()).unwrap();
        let table = representation_counts(2, 2, 60, None, ConvMode::Auto).unwrap();
        let right = cache.store(&table).unwrap();
        let wrong = dir.path().join("r-s3-k2-n60-b0.wlct");
        std::fs::copy(&right, &wrong).unwrap();
        let err = cache.load(3, 2, 60, None).unwrap_err();
        assert!(matches!(err, Error::CorruptTable(_)));
        assert!(!wrong.exists());
    }

    #[test]
    fn roundtrip_checks_equality() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::open(dir.path()).unwrap();
        let table = representation_counts(3, 3, 200, Some(4), ConvMode::Auto).unwrap();
        let back = cache.roundtrip(&table).unwrap();
        assert_eq!(back.part_bound, Some(4));
        assert_eq!(back.counts(), table.counts());
    }

    #[test]
    fn roundtrip_preserves_counts_beyond_u64() {
        use weyl_lab::arith::CountTable;
        use weyl_lab::Count;
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::open(dir.path()).unwrap();
        let big = Count::from(u128::from(u64::MAX) * 3 + 7);
        let counts = vec![Count::from(0u64), Count::from(1u64), big.clone()];
        let table = CountTable::from_parts(40, 1, None, counts).unwrap();
        let back = cache.roundtrip(&table).unwrap();
        assert_eq!(back.get(2), big);
        assert_eq!(back.get(2).to_decimal_string(), "55340232221128654852");
    }
}
