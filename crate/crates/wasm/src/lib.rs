//! Browser bindings: the multiplication table of `A_n`, period profiles
//! across ranks, and the ordinal enumeration.

use wasm_bindgen::prelude::*;

use laver_core::omega::{render_text, Enumerator};
use laver_core::{in_range, LaverTable, Tower};

/// Largest table the page will draw as a grid.
pub const MAX_GRID_RANK: u32 = 8;
/// Largest rank the explorers will build.
pub const MAX_RANK: u32 = 16;
/// Largest bound accepted by `enumerate`.
pub const MAX_ENUMERATE: u32 = 12;

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn check_rank(n: u32, max: u32) -> Result<(), JsError> {
    if n > max {
        return Err(JsError::new(&format!(
            "rank {n} is above the demo limit {max}"
        )));
    }
    Ok(())
}

/// Row-major `2^n x 2^n` values of `a * b`, `b = 1..=2^n`.
#[wasm_bindgen]
pub fn table_grid(n: u32) -> Result<Vec<u32>, JsError> {
    check_rank(n, MAX_GRID_RANK)?;
    let t = LaverTable::build(n).map_err(err)?;
    let size = t.size();
    let mut out = Vec::with_capacity((size * size) as usize);
    for a in 0..size {
        for b in 1..=size {
            out.push(t.apply(a, b).map_err(err)?);
        }
    }
    Ok(out)
}

/// `p_n(a)` for every `a < 2^n`.
#[wasm_bindgen]
pub fn periods(n: u32) -> Result<Vec<u32>, JsError> {
    check_rank(n, MAX_RANK)?;
    let t = LaverTable::build(n).map_err(err)?;
    (0..t.size())
        .map(|a| t.period(a).map(|p| p as u32).map_err(err))
        .collect()
}

/// `p_m(a mod 2^m)` for `m = 0..=max_rank`.
#[wasm_bindgen]
pub fn period_profile(a: u32, max_rank: u32) -> Result<Vec<u32>, JsError> {
    check_rank(max_rank, MAX_RANK)?;
    let tower = Tower::build(max_rank).map_err(err)?;
    Ok((0..=max_rank)
        .map(|m| tower.period(m, a as u64) as u32)
        .collect())
}

/// The ranks `m < max_rank` at which the period of `a` doubles, i.e.
/// where `γ_m` is in the range of `a`.
#[wasm_bindgen]
pub fn doubling_ranks(a: u32, max_rank: u32) -> Result<Vec<u32>, JsError> {
    check_rank(max_rank, MAX_RANK)?;
    let tower = Tower::build(max_rank).map_err(err)?;
    let mut out = Vec::new();
    for m in 0..max_rank {
        if in_range(a as u64, m, &tower).map_err(err)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// The ordinals below `γ_below`, one per line.
#[wasm_bindgen]
pub fn enumerate(below: u32) -> Result<String, JsError> {
    check_rank(below, MAX_ENUMERATE)?;
    let tower = Tower::build(below.max(1)).map_err(err)?;
    let list = Enumerator::new(&tower)
        .enumerate_below(below)
        .map_err(err)?;
    Ok(render_text(&list))
}
