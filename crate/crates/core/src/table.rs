//! The cyclic left-distributive algebras `A_n` (Laver tables).
//!
//! `A_n` is the set `{0, .., 2^n - 1}` with the unique left-distributive
//! operation satisfying `a * 1 = a + 1 mod 2^n`. Elements keep the 0-based
//! convention throughout: `0` plays the role of `2^n`.
//!
//! Each row `a * 1, a * 2, ..` is periodic with a power-of-two period `p(a)`
//! and is strictly increasing until it wraps to `0` at column `p(a)`, so a
//! table only stores the first period of every row.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported rank. Values are stored in at most 32 bits.
pub const MAX_RANK: u32 = 31;

/// Default cap on the total number of stored row entries.
pub const DEFAULT_MAX_ENTRIES: u64 = 1 << 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildLimits {
    /// Hard cap on `sum_a p(a)`; builds that would exceed it fail fast.
    pub max_entries: u64,
}

impl Default for BuildLimits {
    fn default() -> Self {
        BuildLimits {
            max_entries: DEFAULT_MAX_ENTRIES,
        }
    }
}

trait Cell: Copy {
    fn from_u32(v: u32) -> Self;
    fn to_u32(self) -> u32;
}

macro_rules! impl_cell {
    ($($t:ty),*) => {$(
        impl Cell for $t {
            #[inline]
            fn from_u32(v: u32) -> Self {
                v as $t
            }
            #[inline]
            fn to_u32(self) -> u32 {
                self as u32
            }
        }
    )*};
}

impl_cell!(u8, u16, u32);

/// Row storage, using the narrowest unsigned width that holds `2^n - 1`.
#[derive(Clone)]
enum Cells {
    U8(Vec<u8>),
    U16(Vec<u16>),
    U32(Vec<u32>),
}

impl Cells {
    #[inline]
    fn get(&self, idx: usize) -> u32 {
        match self {
            Cells::U8(v) => v[idx] as u32,
            Cells::U16(v) => v[idx] as u32,
            Cells::U32(v) => v[idx],
        }
    }

    fn len(&self) -> usize {
        match self {
            Cells::U8(v) => v.len(),
            Cells::U16(v) => v.len(),
            Cells::U32(v) => v.len(),
        }
    }

    fn width_bytes(&self) -> usize {
        match self {
            Cells::U8(_) => 1,
            Cells::U16(_) => 2,
            Cells::U32(_) => 4,
        }
    }
}

/// Rows as laid out in memory: the start offset and log2 period of every row.
struct Layout {
    starts: Vec<usize>,
    log_periods: Vec<u8>,
}

#[derive(Clone)]
pub struct LaverTable {
    rank: u32,
    starts: Vec<usize>,
    log_periods: Vec<u8>,
    cells: Cells,
}

fn check_rank(rank: u32) -> Result<()> {
    if rank > MAX_RANK {
        return Err(Error::RankTooLarge {
            rank,
            max: MAX_RANK,
        });
    }
    Ok(())
}

fn check_size(rank: u32, limits: BuildLimits) -> Result<()> {
    let size = 1u64 << rank;
    if size > limits.max_entries {
        return Err(Error::ResourceLimit {
            rank,
            needed: size,
            cap: limits.max_entries,
        });
    }
    Ok(())
}

// Rows are built from a = 2^n - 1 down to 0 with a * (b + 1) = (a * b) * (a + 1).
// Every a * b with b < p(a) is larger than a, so its row is already complete.
fn build_cells<T: Cell>(rank: u32, limits: BuildLimits) -> Result<(Vec<T>, Layout)> {
    let size = 1usize << rank;
    let mask = size - 1;
    let mut cells: Vec<T> = Vec::with_capacity(size.saturating_mul(2));
    let mut starts = vec![0usize; size];
    let mut log_periods = vec![0u8; size];

    for a in (0..size).rev() {
        let start = cells.len();
        starts[a] = start;
        let mut last = (a + 1) & mask;
        cells.push(T::from_u32(last as u32));
        while last != 0 {
            let p = 1usize << log_periods[last];
            let next = cells[starts[last] + (a & (p - 1))];
            cells.push(next);
            last = next.to_u32() as usize;
        }
        if cells.len() as u64 > limits.max_entries {
            return Err(Error::ResourceLimit {
                rank,
                needed: cells.len() as u64,
                cap: limits.max_entries,
            });
        }
        let period = cells.len() - start;
        debug_assert!(period.is_power_of_two());
        log_periods[a] = period.trailing_zeros() as u8;
    }
    Ok((
        cells,
        Layout {
            starts,
            log_periods,
        },
    ))
}

fn pack_rows<T: Cell>(rank: u32, rows: &[Vec<u32>]) -> (Vec<T>, Layout) {
    let size = 1usize << rank;
    let total = rows.iter().map(Vec::len).sum();
    let mut cells = Vec::with_capacity(total);
    let mut starts = vec![0usize; size];
    let mut log_periods = vec![0u8; size];
    for (a, row) in rows.iter().enumerate().rev() {
        starts[a] = cells.len();
        log_periods[a] = row.len().trailing_zeros() as u8;
        cells.extend(row.iter().map(|&v| T::from_u32(v)));
    }
    (
        cells,
        Layout {
            starts,
            log_periods,
        },
    )
}

impl LaverTable {
    /// Builds `A_rank` under the default resource limits.
    pub fn build(rank: u32) -> Result<Self> {
        Self::build_with(rank, BuildLimits::default())
    }

    pub fn build_with(rank: u32, limits: BuildLimits) -> Result<Self> {
        check_rank(rank)?;
        check_size(rank, limits)?;
        let (cells, layout) = if rank <= 8 {
            let (c, l) = build_cells::<u8>(rank, limits)?;
            (Cells::U8(c), l)
        } else if rank <= 16 {
            let (c, l) = build_cells::<u16>(rank, limits)?;
            (Cells::U16(c), l)
        } else {
            let (c, l) = build_cells::<u32>(rank, limits)?;
            (Cells::U32(c), l)
        };
        Ok(LaverTable {
            rank,
            starts: layout.starts,
            log_periods: layout.log_periods,
            cells,
        })
    }

    /// Assembles a table from explicit rows (row `a` at index `a`) and checks
    /// the row invariants. Left distributivity is not re-verified here.
    pub fn from_rows(rank: u32, rows: &[Vec<u32>]) -> Result<Self, String> {
        check_rank(rank).map_err(|e| e.to_string())?;
        if rows.len() as u64 != 1u64 << rank {
            return Err(format!(
                "expected {} rows for A_{rank}, found {}",
                1u64 << rank,
                rows.len()
            ));
        }
        if let Some((a, _)) = rows
            .iter()
            .enumerate()
            .find(|(_, r)| !r.len().is_power_of_two())
        {
            return Err(format!("row {a} has a period that is not a power of two"));
        }
        let size = 1u64 << rank;
        for (a, row) in rows.iter().enumerate() {
            if let Some(v) = row.iter().find(|&&v| v as u64 >= size) {
                return Err(format!("row {a}: value {v} out of range"));
            }
        }
        let (cells, layout) = if rank <= 8 {
            let (c, l) = pack_rows::<u8>(rank, rows);
            (Cells::U8(c), l)
        } else if rank <= 16 {
            let (c, l) = pack_rows::<u16>(rank, rows);
            (Cells::U16(c), l)
        } else {
            let (c, l) = pack_rows::<u32>(rank, rows);
            (Cells::U32(c), l)
        };
        let table = LaverTable {
            rank,
            starts: layout.starts,
            log_periods: layout.log_periods,
            cells,
        };
        table.validate_rows()?;
        Ok(table)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Number of elements, `2^n`.
    pub fn size(&self) -> u64 {
        1u64 << self.rank
    }

    #[inline]
    fn mask(&self) -> u32 {
        (self.size() - 1) as u32
    }

    /// Total number of stored entries, `sum_a p(a)`.
    pub fn total_entries(&self) -> usize {
        self.cells.len()
    }

    /// Approximate heap footprint in bytes.
    pub fn memory_bytes(&self) -> usize {
        self.cells.len() * self.cells.width_bytes()
            + self.starts.len() * std::mem::size_of::<usize>()
            + self.log_periods.len()
    }

    fn check(&self, a: u64) -> Result<u32> {
        if a >= self.size() {
            return Err(Error::OutOfRange {
                element: a,
                rank: self.rank,
                size: self.size(),
            });
        }
        Ok(a as u32)
    }

    /// `a * b` for elements `a, b` with the convention `a * 0 = 0`.
    ///
    /// Panics if `a` is out of range; `b` is reduced into the row's period.
    #[inline]
    pub fn op(&self, a: u32, b: u32) -> u32 {
        if b == 0 {
            return 0;
        }
        let a = a as usize;
        let p = 1u32 << self.log_periods[a];
        self.cells
            .get(self.starts[a] + ((b - 1) & (p - 1)) as usize)
    }

    /// `a * b` for an element `a` and any nonnegative integer column `b`.
    pub fn apply(&self, a: u64, b: u64) -> Result<u32> {
        let a = self.check(a)?;
        if b == 0 {
            return Ok(0);
        }
        let p = 1u64 << self.log_periods[a as usize];
        Ok(self
            .cells
            .get(self.starts[a as usize] + ((b - 1) & (p - 1)) as usize))
    }

    /// The period `p_n(a)`: the least `b >= 1` with `a * b = 0`.
    pub fn period(&self, a: u64) -> Result<u64> {
        let a = self.check(a)?;
        Ok(1u64 << self.log_periods[a as usize])
    }

    /// `log2 p_n(a)`.
    pub fn log_period(&self, a: u64) -> Result<u32> {
        let a = self.check(a)?;
        Ok(self.log_periods[a as usize] as u32)
    }

    /// Unchecked `log2 p_n(a)` for in-range elements.
    #[inline]
    pub fn log_period_of(&self, a: u32) -> u32 {
        self.log_periods[a as usize] as u32
    }

    /// The threshold `t_n(a)`: the least `c` with `a * c >= 2^(n-1)`.
    pub fn threshold(&self, a: u64) -> Result<u64> {
        let a = self.check(a)?;
        if a == self.mask() {
            return Err(Error::ThresholdUndefined {
                element: a,
                rank: self.rank,
            });
        }
        let half = (self.size() / 2) as u32;
        let start = self.starts[a as usize];
        let p = 1usize << self.log_periods[a as usize];
        // entries 0..p-1 are strictly increasing and the last of them is 2^n - 1
        let (mut lo, mut hi) = (0usize, p - 1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.cells.get(start + mid) >= half {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo as u64 + 1)
    }

    /// `a o_n b = (a * (b + 1)) - 1 mod 2^n`, the image of composition.
    pub fn compose(&self, a: u64, b: u64) -> Result<u32> {
        self.check(b)?;
        let v = self.apply(a, b + 1)?;
        Ok(v.wrapping_sub(1) & self.mask())
    }

    /// The stored row of `a`: `a * 1, .., a * p(a)`.
    pub fn row(&self, a: u64) -> Result<Vec<u32>> {
        let a = self.check(a)?;
        Ok(self.row_iter(a).collect())
    }

    pub(crate) fn row_iter(&self, a: u32) -> impl Iterator<Item = u32> + '_ {
        let start = self.starts[a as usize];
        let p = 1usize << self.log_periods[a as usize];
        (start..start + p).map(move |i| self.cells.get(i))
    }

    /// Checks one row: `a * 1 = a + 1`, strict increase up to the last
    /// entry, and a final `0`.
    pub fn check_row(&self, a: u32) -> Result<(), String> {
        let mask = self.mask();
        let p = 1u64 << self.log_periods[a as usize];
        let mut prev = a;
        for (i, v) in self.row_iter(a).enumerate() {
            if v > mask {
                return Err(format!("row {a}: value {v} out of range"));
            }
            if i == 0 && v != (a.wrapping_add(1) & mask) {
                return Err(format!("row {a}: a * 1 = {v}"));
            }
            if i as u64 + 1 == p {
                if v != 0 {
                    return Err(format!("row {a}: last entry is {v}, not 0"));
                }
            } else if v <= prev {
                return Err(format!(
                    "row {a}: not strictly increasing at column {}",
                    i + 1
                ));
            }
            prev = v;
        }
        Ok(())
    }

    /// Checks every row, plus the fixed periods of `0`, `2^(n-1)` and `2^n - 1`.
    pub fn validate_rows(&self) -> Result<(), String> {
        let size = self.size();
        for a in 0..size as u32 {
            self.check_row(a)?;
        }
        let expect = |a: u64, p: u64| -> Result<(), String> {
            let got = 1u64 << self.log_periods[a as usize];
            if got != p {
                return Err(format!("period of {a} is {got}, expected {p}"));
            }
            Ok(())
        };
        expect(0, size)?;
        expect(size - 1, 1)?;
        if self.rank >= 1 {
            expect(size / 2, size / 2)?;
        }
        Ok(())
    }
}

impl PartialEq for LaverTable {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.log_periods == other.log_periods
            && (0..self.size() as u32).all(|a| self.row_iter(a).eq(other.row_iter(a)))
    }
}

impl Eq for LaverTable {}

impl fmt::Debug for LaverTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaverTable")
            .field("rank", &self.rank)
            .field("entries", &self.cells.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: full 2^n x 2^n table filled by the same recursion
    // with memoized lookups over a plain matrix, columns 1..=2^n.
    fn brute(rank: u32) -> Vec<Vec<u32>> {
        let size = 1usize << rank;
        let mut t = vec![vec![0u32; size + 1]; size];
        for a in (0..size).rev() {
            t[a][1] = ((a + 1) % size) as u32;
            for b in 2..=size {
                let x = t[a][b - 1] as usize;
                // 0 acts as a left identity (it stands for 2^n)
                t[a][b] = if x == 0 {
                    ((a + 1) % size) as u32
                } else {
                    t[x][a + 1]
                };
            }
        }
        t
    }

    #[test]
    fn small_rows() {
        let t0 = LaverTable::build(0).unwrap();
        assert_eq!(t0.row(0).unwrap(), vec![0]);

        let t1 = LaverTable::build(1).unwrap();
        assert_eq!(t1.row(0).unwrap(), vec![1, 0]);
        assert_eq!(t1.row(1).unwrap(), vec![0]);

        let t2 = LaverTable::build(2).unwrap();
        assert_eq!(t2.row(0).unwrap(), vec![1, 2, 3, 0]);
        assert_eq!(t2.row(1).unwrap(), vec![2, 0]);
        assert_eq!(t2.row(2).unwrap(), vec![3, 0]);
        assert_eq!(t2.row(3).unwrap(), vec![0]);
    }

    #[test]
    fn matches_full_matrix_oracle() {
        for rank in 0..=7 {
            let t = LaverTable::build(rank).unwrap();
            let full = brute(rank);
            let size = 1u64 << rank;
            for a in 0..size {
                for b in 1..=size {
                    assert_eq!(
                        t.apply(a, b).unwrap(),
                        full[a as usize][b as usize],
                        "A_{rank}: {a} * {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn left_distributive_small() {
        for rank in 0..=5 {
            let t = LaverTable::build(rank).unwrap();
            let size = t.size() as u32;
            for a in 0..size {
                for b in 0..size {
                    for c in 0..size {
                        assert_eq!(t.op(a, t.op(b, c)), t.op(t.op(a, b), t.op(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn apply_examples() {
        let t3 = LaverTable::build(3).unwrap();
        assert_eq!(t3.apply(2, 3).unwrap(), 7);
        assert_eq!(t3.period(5).unwrap(), 2);
        assert_eq!(LaverTable::build(5).unwrap().apply(5, 1).unwrap(), 6);
        let t9 = LaverTable::build(9).unwrap();
        assert_eq!(t9.apply(48, 51).unwrap(), 243);
        assert_eq!(t9.apply(192, 51).unwrap(), 243);
        assert_eq!(t3.apply(3, 0).unwrap(), 0);
        // columns wrap with the period
        assert_eq!(t3.apply(2, 3 + 8).unwrap(), 7);
    }

    #[test]
    fn successor_column() {
        for rank in 0..=9 {
            let t = LaverTable::build(rank).unwrap();
            for a in 0..t.size() {
                assert_eq!(t.apply(a, 1).unwrap() as u64, (a + 1) % t.size());
            }
        }
    }

    #[test]
    fn thresholds() {
        assert_eq!(LaverTable::build(5).unwrap().threshold(5).unwrap(), 2);
        assert_eq!(LaverTable::build(10).unwrap().threshold(34).unwrap(), 5);
        for rank in 2..=10 {
            let t = LaverTable::build(rank).unwrap();
            assert_eq!(t.threshold(t.size() / 2).unwrap(), 1);
            assert!(matches!(
                t.threshold(t.size() - 1),
                Err(Error::ThresholdUndefined { .. })
            ));
            let half = (t.size() / 2) as u32;
            for a in 0..t.size() - 1 {
                let c = t.threshold(a).unwrap();
                assert!(t.apply(a, c).unwrap() >= half);
                if c > 1 {
                    assert!(t.apply(a, c - 1).unwrap() < half);
                }
                let p = t.period(a).unwrap();
                assert!(c <= p / 2, "t({a}) = {c} with period {p}");
            }
        }
    }

    #[test]
    fn compose_examples() {
        assert_eq!(LaverTable::build(9).unwrap().compose(34, 4).unwrap(), 242);
        assert_eq!(LaverTable::build(4).unwrap().compose(4, 2).unwrap(), 6);
        let t = LaverTable::build(6).unwrap();
        for b in 0..t.size() - 1 {
            assert_eq!(t.compose(0, b).unwrap() as u64, b);
        }
    }

    #[test]
    fn out_of_range() {
        let t = LaverTable::build(3).unwrap();
        assert!(matches!(t.apply(8, 1), Err(Error::OutOfRange { .. })));
        assert!(t.period(8).is_err());
        assert!(t.compose(1, 8).is_err());
    }

    #[test]
    fn resource_limit() {
        let limits = BuildLimits { max_entries: 100 };
        assert!(matches!(
            LaverTable::build_with(8, limits),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(LaverTable::build_with(40, limits).is_err());
        assert!(LaverTable::build_with(4, limits).is_ok());
    }

    #[test]
    fn from_rows_round_trip_and_rejects() {
        let t = LaverTable::build(6).unwrap();
        let rows: Vec<_> = (0..t.size()).map(|a| t.row(a).unwrap()).collect();
        assert_eq!(LaverTable::from_rows(6, &rows).unwrap(), t);

        let mut bad = rows.clone();
        bad[3][0] = 9;
        assert!(LaverTable::from_rows(6, &bad).is_err());
        let mut bad = rows;
        bad[5].pop();
        assert!(LaverTable::from_rows(6, &bad).is_err());
    }

    #[test]
    fn wide_rows_use_wider_cells() {
        let t = LaverTable::build(9).unwrap();
        assert_eq!(t.cells.width_bytes(), 2);
        t.validate_rows().unwrap();
    }
}
