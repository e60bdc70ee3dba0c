//! Exhaustive verifiers for the threshold, twin and uniqueness hypotheses on
//! `A_n`, and for the lemmas that relate their equivalent forms.
//!
//! Sweeps over "embeddings `a < 2^(n-1)`" (or `a < 2^n`) start at `a = 1`:
//! the element `0` of `A_n` stands for `2^n`, which lies outside those
//! ranges. The threshold hypothesis itself quantifies over the elements
//! `a < 2^n - 1` of `A_n`, `0` included.
//!
//! Every verifier requires tables through `A_{n+1}` (the corollary on the
//! upper half needs `A_{n+2}`) and fails fast if they are missing.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::crit::{act_on_gamma, in_range_unchecked, least_range_witness};
use crate::error::{Error, Result};
use crate::identities;
use crate::report::{
    finish, par_map, sweep, Check, Outcome, SweepOptions, SweepResult, VerificationReport, Witness,
};
use crate::tower::Tower;

fn pow2(k: u32) -> u64 {
    1u64 << k
}

fn holds_or(ok: bool, w: impl FnOnce() -> Witness) -> Outcome {
    if ok {
        Outcome::Holds
    } else {
        Outcome::Violated(w())
    }
}

/// `c` with `c + 1 = t_n(a)`.
fn threshold_pred(n: u32, a: u64, tower: &Tower) -> Result<u64> {
    Ok(tower.table(n)?.threshold(a)? - 1)
}

/// Threshold hypothesis at one element `a < 2^n - 1` of `A_n`:
/// with `p_n(a) = 2^k` and `c + 1 = t_n(a)`, the period of `c` doubles
/// between `A_k` and `A_{k+1}`.
pub fn th_at(n: u32, a: u64, tower: &Tower) -> Result<Outcome> {
    if a + 1 >= pow2(n) {
        return Ok(Outcome::Excluded);
    }
    let k = tower.log_period(n, a);
    let c = threshold_pred(n, a, tower)?;
    let ok = in_range_unchecked(c, k, tower);
    Ok(holds_or(ok, || {
        Witness::new()
            .with("a", a)
            .with("k", k)
            .with("period_a", pow2(k))
            .with("threshold", c + 1)
            .with("c", c)
            .with("period_k_c", tower.period(k, c))
            .with("period_k1_c", tower.period(k + 1, c))
    }))
}

/// The conclusion of one weak-threshold form for `a` and `c + 1 = t_n(a)`,
/// without checking the hypothesis `γ_n ∈ range(a)`.
pub fn wth_conclusion(form: Check, n: u32, a: u64, c: u64, tower: &Tower) -> Result<bool> {
    Ok(match form {
        Check::Wth => in_range_unchecked(c, tower.log_period(n, a), tower),
        Check::Wth1 => in_range_unchecked(tower.apply(n, a, c) as u64, n, tower),
        Check::Wth2 => in_range_unchecked(tower.compose(n, a, c) as u64, n, tower),
        Check::Wth3 => in_range_unchecked(tower.compose(n - 1, a, c) as u64, n - 1, tower),
        other => {
            return Err(Error::InvalidArgument(format!(
                "{other} is not a weak threshold form"
            )))
        }
    })
}

/// One weak-threshold form at embedding `a`. The hypothesis is
/// `γ_n ∈ range(a)`; `a = 2^n - 1` has no threshold and is excluded.
pub fn wth_at(form: Check, n: u32, a: u64, tower: &Tower) -> Result<Outcome> {
    if a == 0 || a + 1 >= pow2(n) || !in_range_unchecked(a, n, tower) {
        return Ok(Outcome::Excluded);
    }
    let c = threshold_pred(n, a, tower)?;
    let ok = wth_conclusion(form, n, a, c, tower)?;
    Ok(holds_or(ok, || {
        let w = Witness::new()
            .with("a", a)
            .with("k", tower.log_period(n, a))
            .with("threshold", c + 1)
            .with("c", c);
        match form {
            Check::Wth1 => w.with("ac", tower.apply(n, a, c)),
            Check::Wth2 => w.with("a_o_c", tower.compose(n, a, c)),
            Check::Wth3 => w.with("a_o_c", tower.compose(n - 1, a, c)),
            _ => w,
        }
    }))
}

/// Twin hypothesis at `a < 2^(n-1)`, `n` odd: `γ_n ∈ range(a)` implies
/// `γ_{n-1} ∈ range(a)`.
pub fn twin_at(n: u32, a: u64, tower: &Tower) -> Result<Outcome> {
    if !in_range_unchecked(a, n, tower) {
        return Ok(Outcome::Excluded);
    }
    let ok = in_range_unchecked(a, n - 1, tower);
    Ok(holds_or(ok, || {
        Witness::new()
            .with("a", a)
            .with("period_n1_a", tower.period(n - 1, a))
            .with("period_n_a", tower.period(n, a))
            .with("period_n_plus_1_a", tower.period(n + 1, a))
    }))
}

/// Twin statement on the upper half, `2^(n-1) <= a < 2^n`, `n` odd:
/// `γ_{n+1} ∈ range(a)` implies `γ_n ∈ range(a)`.
pub fn twin_upper_at(n: u32, a: u64, tower: &Tower) -> Result<Outcome> {
    if !in_range_unchecked(a, n + 1, tower) {
        return Ok(Outcome::Excluded);
    }
    let ok = in_range_unchecked(a, n, tower);
    Ok(holds_or(ok, || {
        Witness::new()
            .with("a", a)
            .with("period_n_a", tower.period(n, a))
            .with("period_n_plus_1_a", tower.period(n + 1, a))
    }))
}

/// Stability of `[ac]` and `[a o c]` across `A_{n-1}, A_n, A_{n+1}` for
/// `γ_n ∈ range(a)` and `c + 1 = t_n(a)`.
pub fn lemma53_at(n: u32, a: u64, tower: &Tower) -> Result<Outcome> {
    if a == 0 || !in_range_unchecked(a, n, tower) {
        return Ok(Outcome::Excluded);
    }
    let c = threshold_pred(n, a, tower)?;
    let ac = [
        tower.apply(n + 1, a, c),
        tower.apply(n, a, c),
        tower.apply(n - 1, a, c),
    ];
    let aoc = [tower.compose(n + 1, a, c), tower.compose(n, a, c)];
    let ok = ac[0] == ac[1] && ac[1] == ac[2] && aoc[0] == aoc[1];
    Ok(holds_or(ok, || {
        Witness::new()
            .with("a", a)
            .with("c", c)
            .with("ac_n_plus_1", ac[0])
            .with("ac_n", ac[1])
            .with("ac_n_minus_1", ac[2])
            .with("a_o_c_n_plus_1", aoc[0])
            .with("a_o_c_n", aoc[1])
    }))
}

/// The five equivalent weak-threshold statements evaluated at `a`.
///
/// Returns `None` when `a` misses the hypothesis `γ_n ∈ range(a)`.
pub fn wth_forms(n: u32, a: u64, tower: &Tower) -> Result<Option<[bool; 5]>> {
    if a == 0 || a + 1 >= pow2(n) || !in_range_unchecked(a, n, tower) {
        return Ok(None);
    }
    let k = tower.log_period(n, a);
    let c = threshold_pred(n, a, tower)?;
    Ok(Some([
        in_range_unchecked(c, k, tower),
        in_range_unchecked(tower.apply(n, a, c) as u64, n, tower),
        in_range_unchecked(tower.apply(n - 1, a, c) as u64, n, tower),
        in_range_unchecked(tower.compose(n, a, c) as u64, n, tower),
        in_range_unchecked(tower.compose(n - 1, a, c) as u64, n - 1, tower),
    ]))
}

pub fn lemma54_at(n: u32, a: u64, tower: &Tower) -> Result<Outcome> {
    let Some(forms) = wth_forms(n, a, tower)? else {
        return Ok(Outcome::Excluded);
    };
    let ok = forms.iter().all(|&f| f == forms[0]);
    Ok(holds_or(ok, || {
        forms
            .iter()
            .enumerate()
            .fold(Witness::new().with("a", a), |w, (i, &f)| {
                w.with(&format!("form_{}", i + 1), f as u64)
            })
    }))
}

/// Range shift for even `n = 2m + 2`: for `0 < a < 2^(n-2)`,
/// `γ_{n-1} ∈ range(a)` iff `γ_n ∈ range(2^(n-2) + a)`. The point `a = 0`
/// checks `2^(n-2)·γ_{n-1} = γ_n` instead.
pub fn lemma59_at(n: u32, a: u64, tower: &Tower) -> Result<Outcome> {
    let h = pow2(n - 2);
    if a == 0 {
        let act = act_on_gamma(h, n - 1, tower);
        let ok = act.certified && act.value.0 == n;
        return Ok(holds_or(ok, || {
            Witness::new()
                .with("a", 0u64)
                .with("act", act.value.0)
                .with("certified", act.certified as u64)
        }));
    }
    let lower = in_range_unchecked(a, n - 1, tower);
    let upper = in_range_unchecked(h + a, n, tower);
    Ok(holds_or(lower == upper, || {
        Witness::new()
            .with("a", a)
            .with("lower_in_range", lower as u64)
            .with("upper_in_range", upper as u64)
    }))
}

/// Least `c` with `γ_k ∈ range(c)` and the unique `i` with `c·γ_i = γ_k`.
fn least_witnesses(n: u32, tower: &Tower) -> Result<Vec<Option<(u64, u32)>>> {
    let mut out = vec![None];
    for k in 1..=n {
        let c = least_range_witness(k, tower)?;
        let i = tower.log_period(k, c);
        // c·γ_i is strictly increasing in i, so the preimage must be unique
        let act = act_on_gamma(c, i, tower);
        if !act.certified || act.value.0 != k {
            return Err(Error::Uncertified(format!(
                "least range witness {c} for γ_{k}: expected c·γ_{i} = γ_{k}, found {act:?}"
            )));
        }
        out.push(Some((c, i)));
    }
    Ok(out)
}

/// Direct uniqueness check on one pair with an explicit `c`.
///
/// For `weak = false` the hypothesis is `p_n(a) = p_n(b) = 2^k` and
/// `a·γ_i = b·γ_i` where `c·γ_i = γ_k`; for `weak = true` it is
/// `a·γ_k = b·γ_k = γ_n`. The conclusion fails when `[ac]_n = [bc]_n`.
pub fn uniqueness_pair(
    weak: bool,
    n: u32,
    a: u64,
    b: u64,
    c: u64,
    tower: &Tower,
) -> Result<Outcome> {
    tower.require(n + 1, || "uniqueness check".into())?;
    let k = tower.log_period(n, a);
    if a == b || k == 0 || tower.log_period(n, b) != k {
        return Ok(Outcome::Excluded);
    }
    let mut w = Witness::new()
        .with("a", a)
        .with("b", b)
        .with("c", c)
        .with("k", k);
    if weak {
        if !in_range_unchecked(a, n, tower) || !in_range_unchecked(b, n, tower) {
            return Ok(Outcome::Excluded);
        }
    } else {
        let i = tower.log_period(k, c);
        let act_a = act_on_gamma(a, i, tower).certified_value()?;
        let act_b = act_on_gamma(b, i, tower).certified_value()?;
        if act_a != act_b {
            return Ok(Outcome::Excluded);
        }
        w = w.with("i", i).with("act", act_a);
    }
    let (ac, bc) = (tower.apply(n, a, c), tower.apply(n, b, c));
    Ok(holds_or(ac != bc, || w.with("ac", ac).with("bc", bc)))
}

fn uniqueness_sweep(weak: bool, n: u32, tower: &Tower, opts: &SweepOptions) -> Result<SweepResult> {
    let witnesses = least_witnesses(n, tower)?;
    let half = pow2(n - 1);
    // per embedding: (k, grouping key) or None when outside the hypothesis
    let keys = par_map(1, half, opts, |a| -> Result<Option<(u32, u64, u64)>> {
        let k = tower.log_period(n, a);
        if k == 0 || (weak && !in_range_unchecked(a, n, tower)) {
            return Ok(None);
        }
        let (c, i) = witnesses[k as usize].expect("k >= 1");
        let ac = tower.apply(n, a, c) as u64;
        let act = if weak {
            0
        } else {
            act_on_gamma(a, i, tower).certified_value()? as u64
        };
        Ok(Some((k, act, ac)))
    })?;

    let pairs = |m: u64| m * m.saturating_sub(1) / 2;
    let mut by_period: BTreeMap<u32, u64> = BTreeMap::new();
    let mut by_hyp: BTreeMap<(u32, u64), u64> = BTreeMap::new();
    let mut by_value: BTreeMap<(u32, u64, u64), Vec<u64>> = BTreeMap::new();
    for (idx, key) in keys.iter().enumerate() {
        if let Some((k, act, ac)) = *key {
            *by_period.entry(k).or_default() += 1;
            *by_hyp.entry((k, act)).or_default() += 1;
            by_value
                .entry((k, act, ac))
                .or_default()
                .push(idx as u64 + 1);
        }
    }
    let checked = by_period.values().map(|&m| pairs(m)).sum();
    let qualifying = by_hyp.values().map(|&m| pairs(m)).sum();

    let mut violations = Vec::new();
    for ((k, act, ac), members) in by_value {
        let (c, i) = witnesses[k as usize].expect("k >= 1");
        for (x, &a) in members.iter().enumerate() {
            for &b in &members[x + 1..] {
                let mut w = Witness::new()
                    .with("a", a)
                    .with("b", b)
                    .with("c", c)
                    .with("k", k)
                    .with("ac", ac)
                    .with("bc", ac);
                if !weak {
                    w = w.with("i", i).with("act", act);
                }
                violations.push(((a << 32) | b, w));
            }
        }
    }
    violations.sort_by_key(|(key, _)| *key);
    Ok(SweepResult {
        checked,
        qualifying,
        violations,
    })
}

/// Runs `check` at rank `n`.
pub fn verify(
    check: Check,
    n: u32,
    tower: &Tower,
    opts: &SweepOptions,
) -> Result<VerificationReport> {
    if !check.accepts_rank(n) {
        return Err(Error::InvalidArgument(format!(
            "{check} is not defined at rank {n}"
        )));
    }
    tower.require(check.required_rank(n), || {
        format!("verify {check} at n = {n}")
    })?;
    let start = Instant::now();
    let result = match check {
        Check::Th => sweep(0, pow2(n).saturating_sub(1), opts, |a| th_at(n, a, tower))?,
        Check::Wth => sweep(1, pow2(n - 1), opts, |a| wth_at(check, n, a, tower))?,
        Check::Wth1 | Check::Wth2 | Check::Wth3 => {
            let hi = if opts.narrow {
                pow2(n - 1)
            } else {
                pow2(n) - 1
            };
            sweep(1, hi, opts, |a| wth_at(check, n, a, tower))?
        }
        Check::Twin => sweep(1, pow2(n - 1), opts, |a| twin_at(n, a, tower))?,
        Check::TwinUpper => sweep(pow2(n - 1), pow2(n), opts, |a| twin_upper_at(n, a, tower))?,
        Check::Lemma53 => sweep(1, pow2(n - 1), opts, |a| lemma53_at(n, a, tower))?,
        Check::Lemma54 => sweep(1, pow2(n - 1), opts, |a| lemma54_at(n, a, tower))?,
        Check::Lemma59 => sweep(0, pow2(n - 2), opts, |a| lemma59_at(n, a, tower))?,
        Check::Uh | Check::Wuh => uniqueness_sweep(check == Check::Wuh, n, tower, opts)?,
        _ => identities::run(check, n, tower, opts)?,
    };
    Ok(finish(check, n, result, opts, start.elapsed()))
}

/// Runs `check` at every rank `<= n` in its domain. Ranks whose tables are
/// not in the tower are reported as resource-limited.
pub fn verify_upto(
    check: Check,
    n: u32,
    tower: &Tower,
    opts: &SweepOptions,
) -> Result<Vec<VerificationReport>> {
    (0..=n)
        .filter(|&m| check.accepts_rank(m))
        .map(|m| {
            if check.required_rank(m) > tower.max_rank() {
                Ok(VerificationReport::resource_limited(check, m))
            } else {
                verify(check, m, tower, opts)
            }
        })
        .collect()
}

/// Re-derives a reported counterexample from the primitive operations.
/// Returns true when the same violation, with the same data, is reproduced.
pub fn revalidate(check: Check, n: u32, witness: &Witness, tower: &Tower) -> Result<bool> {
    tower.require(check.required_rank(n), || format!("revalidate {check}"))?;
    let a = witness
        .get("a")
        .ok_or_else(|| Error::InvalidArgument("witness has no 'a'".into()))?;
    let outcome = match check {
        Check::Th => th_at(n, a, tower)?,
        Check::Wth | Check::Wth1 | Check::Wth2 | Check::Wth3 => wth_at(check, n, a, tower)?,
        Check::Twin => twin_at(n, a, tower)?,
        Check::TwinUpper => twin_upper_at(n, a, tower)?,
        Check::Lemma53 => lemma53_at(n, a, tower)?,
        Check::Lemma54 => lemma54_at(n, a, tower)?,
        Check::Lemma59 => lemma59_at(n, a, tower)?,
        Check::Uh | Check::Wuh => {
            let b = witness
                .get("b")
                .ok_or_else(|| Error::InvalidArgument("witness has no 'b'".into()))?;
            let c = least_range_witness(tower.log_period(n, a).max(1), tower)?;
            uniqueness_pair(check == Check::Wuh, n, a, b, c, tower)?
        }
        _ => identities::revalidate(check, n, witness, tower)?,
    };
    Ok(outcome == Outcome::Violated(witness.clone()))
}
