//! A tower of tables `A_0, A_1, .., A_N` queried together.
//!
//! Integers are reduced mod `2^m` before a query against `A_m`; reduction is
//! a homomorphism `A_{m+1} -> A_m`, so this is well defined.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::store::TableStore;
use crate::table::{BuildLimits, LaverTable};

#[derive(Clone, Debug)]
pub struct Tower {
    tables: Vec<Arc<LaverTable>>,
}

impl Tower {
    pub fn build(max_rank: u32) -> Result<Self> {
        Self::open(max_rank, BuildLimits::default(), None)
    }

    /// Builds (or loads from `store`, when given) every table through `A_max_rank`.
    pub fn open(max_rank: u32, limits: BuildLimits, store: Option<&TableStore>) -> Result<Self> {
        let mut tables = Vec::with_capacity(max_rank as usize + 1);
        for rank in 0..=max_rank {
            let t = match store {
                Some(s) => s.load_or_build(rank, limits)?,
                None => LaverTable::build_with(rank, limits)?,
            };
            tables.push(Arc::new(t));
        }
        Ok(Tower { tables })
    }

    /// Like [`Tower::open`], but stops below the first rank that would
    /// exceed `limits` instead of failing. `A_0` is always present.
    pub fn open_within(
        max_rank: u32,
        limits: BuildLimits,
        store: Option<&TableStore>,
    ) -> Result<Self> {
        let mut tables = Vec::with_capacity(max_rank as usize + 1);
        for rank in 0..=max_rank {
            let t = match store {
                Some(s) => s.load_or_build(rank, limits),
                None => LaverTable::build_with(rank, limits),
            };
            match t {
                Ok(t) => tables.push(Arc::new(t)),
                Err(Error::ResourceLimit { .. }) if rank > 0 => break,
                Err(e) => return Err(e),
            }
        }
        Ok(Tower { tables })
    }

    /// Wraps already-built tables; they must be exactly `A_0, .., A_N` in order.
    pub fn from_tables(tables: Vec<LaverTable>) -> Result<Self> {
        if tables.is_empty() {
            return Err(Error::InvalidArgument("empty tower".into()));
        }
        for (i, t) in tables.iter().enumerate() {
            if t.rank() != i as u32 {
                return Err(Error::InvalidArgument(format!(
                    "table at position {i} has rank {}",
                    t.rank()
                )));
            }
        }
        Ok(Tower {
            tables: tables.into_iter().map(Arc::new).collect(),
        })
    }

    pub fn max_rank(&self) -> u32 {
        self.tables.len() as u32 - 1
    }

    pub fn table(&self, rank: u32) -> Result<&LaverTable> {
        self.tables
            .get(rank as usize)
            .map(Arc::as_ref)
            .ok_or_else(|| Error::InsufficientTables {
                what: format!("A_{rank}"),
                needed: rank,
                available: self.max_rank(),
            })
    }

    pub fn top(&self) -> &LaverTable {
        self.tables.last().expect("tower is never empty")
    }

    /// Fails unless tables through `A_needed` are present.
    pub fn require(&self, needed: u32, what: impl FnOnce() -> String) -> Result<()> {
        if needed > self.max_rank() {
            return Err(Error::InsufficientTables {
                what: what(),
                needed,
                available: self.max_rank(),
            });
        }
        Ok(())
    }

    #[inline]
    fn reduce(rank: u32, a: u64) -> u32 {
        (a & ((1u64 << rank) - 1)) as u32
    }

    /// `log2 p_m(a mod 2^m)`. Panics if `m` is above the tower.
    #[inline]
    pub fn log_period(&self, m: u32, a: u64) -> u32 {
        self.tables[m as usize].log_period_of(Self::reduce(m, a))
    }

    /// `p_m(a mod 2^m)`. Panics if `m` is above the tower.
    #[inline]
    pub fn period(&self, m: u32, a: u64) -> u64 {
        1u64 << self.log_period(m, a)
    }

    /// `[a * b]_m` for integers `a, b`. Panics if `m` is above the tower.
    #[inline]
    pub fn apply(&self, m: u32, a: u64, b: u64) -> u32 {
        let t = &self.tables[m as usize];
        let a = Self::reduce(m, a);
        if b == 0 {
            return 0;
        }
        let p = 1u64 << t.log_period_of(a);
        t.op(a, (((b - 1) & (p - 1)) + 1) as u32)
    }

    /// `[a o b]_m` for integers `a, b`. Panics if `m` is above the tower.
    #[inline]
    pub fn compose(&self, m: u32, a: u64, b: u64) -> u32 {
        let mask = ((1u64 << m) - 1) as u32;
        self.apply(m, a, (b & mask as u64) + 1).wrapping_sub(1) & mask
    }
}
