//! On-disk cache of built tables, one `A<n>.lavr` file per rank.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! "LAVR"  version:u8  rank:u8
//! for a in 0..2^n:  period:u32  value:u32 * period
//! crc32 of everything above:u32
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::table::{BuildLimits, LaverTable};

pub const MAGIC: &[u8; 4] = b"LAVR";
pub const FORMAT_VERSION: u8 = 1;
/// Ranks whose values fit the fixed 32-bit record width.
pub const MAX_CACHE_RANK: u32 = 31;

const HEADER_LEN: usize = 6;
const TRAILER_LEN: usize = 4;

/// What to do when a cache file fails validation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CorruptPolicy {
    /// Rebuild the table and overwrite the bad file.
    #[default]
    Rebuild,
    /// Surface the corruption as an error.
    Fail,
}

#[derive(Clone, Debug)]
pub struct TableStore {
    dir: PathBuf,
    policy: CorruptPolicy,
}

pub fn cache_file_name(rank: u32) -> String {
    format!("A{rank}.lavr")
}

/// Serializes `table` into the cache format.
pub fn encode(table: &LaverTable) -> Vec<u8> {
    let len = HEADER_LEN + 4 * (table.size() as usize + table.total_entries()) + TRAILER_LEN;
    let mut buf = Vec::with_capacity(len);
    buf.extend_from_slice(MAGIC);
    buf.push(FORMAT_VERSION);
    buf.push(table.rank() as u8);
    for a in 0..table.size() as u32 {
        let p = 1u32 << table.log_period_of(a);
        buf.extend_from_slice(&p.to_le_bytes());
        for v in table.row_iter(a) {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    debug_assert_eq!(buf.len(), len);
    buf
}

/// Parses and validates a cache image; `path` is only used for messages.
pub fn decode(bytes: &[u8], path: &Path) -> Result<LaverTable> {
    let corrupt = |reason: String| Error::CorruptCache {
        path: path.to_path_buf(),
        reason,
    };
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(Error::BadMagic {
            path: path.to_path_buf(),
        });
    }
    if bytes.len() < HEADER_LEN + TRAILER_LEN {
        return Err(corrupt(format!("file is only {} bytes", bytes.len())));
    }
    if bytes[4] != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            path: path.to_path_buf(),
            found: bytes[4],
            expected: FORMAT_VERSION,
        });
    }
    let body_len = bytes.len() - TRAILER_LEN;
    let stored = u32::from_le_bytes(bytes[body_len..].try_into().expect("4 bytes"));
    let actual = crc32fast::hash(&bytes[..body_len]);
    if stored != actual {
        return Err(corrupt(format!(
            "checksum mismatch (stored {stored:#010x}, computed {actual:#010x})"
        )));
    }
    let rank = bytes[5] as u32;
    if rank > MAX_CACHE_RANK {
        return Err(corrupt(format!("rank {rank} exceeds {MAX_CACHE_RANK}")));
    }

    let body = &bytes[HEADER_LEN..body_len];
    if !body.len().is_multiple_of(4) {
        return Err(corrupt("record area is not a whole number of words".into()));
    }
    let mut words = body
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")));
    let size = 1usize << rank;
    let mut rows = Vec::with_capacity(size);
    for a in 0..size {
        let p = words
            .next()
            .ok_or_else(|| corrupt(format!("missing record for element {a}")))?;
        if !p.is_power_of_two() || p as u64 > size as u64 {
            return Err(corrupt(format!("element {a} has invalid period {p}")));
        }
        let row: Vec<u32> = words.by_ref().take(p as usize).collect();
        if row.len() != p as usize {
            return Err(corrupt(format!("row {a} is truncated")));
        }
        rows.push(row);
    }
    if words.next().is_some() {
        return Err(corrupt("trailing data after the last record".into()));
    }
    LaverTable::from_rows(rank, &rows).map_err(corrupt)
}

/// Writes `A<n>.lavr` into `dir` via a temporary file and an atomic rename.
pub fn save(table: &LaverTable, dir: &Path) -> Result<PathBuf> {
    if table.rank() > MAX_CACHE_RANK {
        return Err(Error::RankTooLarge {
            rank: table.rank(),
            max: MAX_CACHE_RANK,
        });
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(cache_file_name(table.rank()));
    let tmp = dir.join(format!(
        ".{}.tmp.{}",
        cache_file_name(table.rank()),
        std::process::id()
    ));
    let bytes = encode(table);
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()
    };
    if let Err(e) = write() {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(&tmp, e));
    }
    fs::rename(&tmp, &path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(&path, e)
    })?;
    Ok(path)
}

/// Reads and validates `A<n>.lavr` from `dir`.
pub fn load(dir: &Path, rank: u32) -> Result<LaverTable> {
    let path = dir.join(cache_file_name(rank));
    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let table = decode(&bytes, &path)?;
    if table.rank() != rank {
        return Err(Error::CorruptCache {
            path,
            reason: format!("file holds A_{}, expected A_{rank}", table.rank()),
        });
    }
    Ok(table)
}

impl TableStore {
    pub fn new(dir: impl Into<PathBuf>, policy: CorruptPolicy) -> Self {
        TableStore {
            dir: dir.into(),
            policy,
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, rank: u32) -> PathBuf {
        self.dir.join(cache_file_name(rank))
    }

    /// Loads `A_rank` if cached, otherwise builds and caches it.
    pub fn load_or_build(&self, rank: u32, limits: BuildLimits) -> Result<LaverTable> {
        match load(&self.dir, rank) {
            Ok(t) => {
                if t.total_entries() as u64 > limits.max_entries {
                    return Err(Error::ResourceLimit {
                        rank,
                        needed: t.total_entries() as u64,
                        cap: limits.max_entries,
                    });
                }
                return Ok(t);
            }
            Err(Error::Io { source, .. }) if source.kind() == std::io::ErrorKind::NotFound => {}
            Err(
                e @ (Error::CorruptCache { .. }
                | Error::BadMagic { .. }
                | Error::VersionMismatch { .. }),
            ) => {
                if self.policy == CorruptPolicy::Fail {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
        let t = LaverTable::build_with(rank, limits)?;
        save(&t, &self.dir)?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_is_thirty_bytes() {
        let t = LaverTable::build(1).unwrap();
        let bytes = encode(&t);
        assert_eq!(bytes.len(), 30);
        assert_eq!(&bytes[..6], b"LAVR\x01\x01");
        // element 0: period 2, row [1, 0]
        assert_eq!(&bytes[6..18], &[2, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0]);
        // element 1: period 1, row [0]
        assert_eq!(&bytes[18..26], &[1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(
            u32::from_le_bytes(bytes[26..30].try_into().unwrap()),
            crc32fast::hash(&bytes[..26])
        );
    }

    #[test]
    fn length_formula() {
        for rank in 0..=8 {
            let t = LaverTable::build(rank).unwrap();
            let expect: u64 = 6
                + (0..t.size())
                    .map(|a| 4 * (1 + t.period(a).unwrap()))
                    .sum::<u64>()
                + 4;
            assert_eq!(encode(&t).len() as u64, expect);
        }
    }

    #[test]
    fn decode_rejects_damage() {
        let t = LaverTable::build(4).unwrap();
        let good = encode(&t);
        let p = Path::new("A4.lavr");
        assert_eq!(decode(&good, p).unwrap(), t);

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(decode(&bad, p), Err(Error::BadMagic { .. })));

        let mut bad = good.clone();
        bad[4] = 2;
        assert!(matches!(
            decode(&bad, p),
            Err(Error::VersionMismatch { .. })
        ));

        let bad = &good[..good.len() - 5];
        assert!(matches!(decode(bad, p), Err(Error::CorruptCache { .. })));

        let mut bad = good.clone();
        bad[20] ^= 1;
        assert!(matches!(decode(&bad, p), Err(Error::CorruptCache { .. })));

        assert!(matches!(decode(b"LA", p), Err(Error::BadMagic { .. })));
    }

    #[test]
    fn decode_rejects_bad_rows_with_valid_crc() {
        let t = LaverTable::build(3).unwrap();
        let mut bytes = encode(&t);
        let n = bytes.len();
        // first value of row 0 should be 1
        bytes[10] = 5;
        let crc = crc32fast::hash(&bytes[..n - 4]);
        bytes[n - 4..].copy_from_slice(&crc.to_le_bytes());
        assert!(matches!(
            decode(&bytes, Path::new("x")),
            Err(Error::CorruptCache { .. })
        ));
    }
}
