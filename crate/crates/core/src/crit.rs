//! Critical points `γ_n`, represented by their index `n`, and the action of
//! integer embeddings on them, computed from periods in the tables `A_m`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tower::Tower;
use crate::word::Word;

/// The critical point `γ_idx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gamma(pub u32);

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "γ_{}", self.0)
    }
}

/// A critical-point index together with how far it was checked.
///
/// `certified` means the defining inequality was witnessed one rank above the
/// answer; otherwise `value` is only a lower bound that a larger table might
/// raise. `bound` is the highest table rank consulted, `None` for answers
/// that need no tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedIndex {
    pub value: Gamma,
    pub certified: bool,
    pub bound: Option<u32>,
}

impl CertifiedIndex {
    fn exact(value: u32) -> Self {
        CertifiedIndex {
            value: Gamma(value),
            certified: true,
            bound: None,
        }
    }

    /// The index, or an error if it was not certified.
    pub fn certified_value(&self) -> Result<u32> {
        if self.certified {
            Ok(self.value.0)
        } else {
            Err(Error::Uncertified(format!(
                "index is at least {} but tables stop at A_{}",
                self.value.0,
                self.bound.unwrap_or(0)
            )))
        }
    }
}

/// The 2-adic valuation of a positive integer.
pub fn signature_int(a: u64) -> Result<u32> {
    if a == 0 {
        return Err(Error::ZeroSignature);
    }
    Ok(a.trailing_zeros())
}

/// `crit(a) = γ_s(a)` for a positive integer `a`.
pub fn crit_int(a: u64) -> Result<CertifiedIndex> {
    signature_int(a).map(CertifiedIndex::exact)
}

/// `crit(w) = γ_s(w)`, searched through the tower.
pub fn crit_word(w: &Word, tower: &Tower) -> CertifiedIndex {
    w.signature(tower)
}

/// `a·γ_k = γ_n` with `n = max { m : p_m(a mod 2^m) <= 2^k }`.
///
/// The answer is certified when `p_{n+1}(a) > 2^k` is seen inside the tower.
/// When `2^(k+1)` divides `a` the result is `k` itself.
pub fn act_on_gamma(a: u64, k: u32, tower: &Tower) -> CertifiedIndex {
    let bound = tower.max_rank();
    // p_m <= 2^m, so every m <= k qualifies
    for m in (k + 1)..=bound {
        if tower.log_period(m, a) > k {
            return CertifiedIndex {
                value: Gamma(m - 1),
                certified: true,
                bound: Some(bound),
            };
        }
    }
    CertifiedIndex {
        value: Gamma(bound.max(k)),
        certified: false,
        bound: Some(bound),
    }
}

/// Whether `γ_n` is in the range of `a`, i.e. `p_{n+1}(a) = 2 p_n(a)`.
pub fn in_range(a: u64, n: u32, tower: &Tower) -> Result<bool> {
    tower.require(n + 1, || format!("range membership of γ_{n}"))?;
    Ok(in_range_unchecked(a, n, tower))
}

#[inline]
pub(crate) fn in_range_unchecked(a: u64, n: u32, tower: &Tower) -> bool {
    tower.log_period(n + 1, a) == tower.log_period(n, a) + 1
}

/// The `k` with `a·γ_k = γ_n`, if `γ_n` is in the range of `a`.
///
/// Such a `k` satisfies `p_n(a) <= 2^k < p_{n+1}(a)`, which pins it to
/// `log2 p_n(a)` once the period doubles.
pub fn preimage(a: u64, n: u32, tower: &Tower) -> Result<Option<u32>> {
    if in_range(a, n, tower)? {
        Ok(Some(tower.log_period(n, a)))
    } else {
        Ok(None)
    }
}

/// The least positive `c` with `γ_k` in the range of `c`.
///
/// For `k >= 2` this is at most `2^(k-1) - 1`, since `(2^(k-1) - 1)·γ_1 = γ_k`.
pub fn least_range_witness(k: u32, tower: &Tower) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "γ_0 is the least critical point and is in no range".into(),
        ));
    }
    tower.require(k + 1, || format!("least range witness for γ_{k}"))?;
    let cap = 1u64 << k;
    (1..cap)
        .find(|&c| in_range_unchecked(c, k, tower))
        .ok_or_else(|| Error::InvalidArgument(format!("no c < 2^{k} has γ_{k} in its range")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(n: u32) -> Tower {
        Tower::build(n).unwrap()
    }

    #[test]
    fn crit_of_integers() {
        assert_eq!(crit_int(12).unwrap().value, Gamma(2));
        assert_eq!(crit_int(7).unwrap().value, Gamma(0));
        for n in 0..40 {
            assert_eq!(crit_int(1 << n).unwrap().value, Gamma(n));
        }
        assert!(matches!(crit_int(0), Err(Error::ZeroSignature)));
    }

    #[test]
    fn powers_of_two_shift_gammas() {
        let t = tower(12);
        for n in 0..=10 {
            let r = act_on_gamma(1 << n, n, &t);
            assert!(r.certified);
            assert_eq!(r.value, Gamma(n + 1));
        }
    }

    #[test]
    fn all_ones_hit_gamma_n() {
        let t = tower(12);
        for n in 1..=11u32 {
            let a = (1u64 << n) - 1;
            assert_eq!(act_on_gamma(a, 0, &t).certified_value().unwrap(), n);
            if n + 1 < 12 {
                assert_eq!(act_on_gamma(a, 1, &t).certified_value().unwrap(), n + 1);
            }
            assert!(in_range(a, n, &t).unwrap());
        }
    }

    #[test]
    fn example_actions() {
        let t = tower(11);
        assert_eq!(act_on_gamma(48, 7, &t).certified_value().unwrap(), 9);
        assert_eq!(act_on_gamma(192, 7, &t).certified_value().unwrap(), 9);
        assert_eq!(act_on_gamma(51, 3, &t).certified_value().unwrap(), 7);
        assert!(!in_range(6, 5, &t).unwrap());
        assert!(!in_range(242, 9, &t).unwrap());
    }

    #[test]
    fn fixed_below_critical_point() {
        let t = tower(10);
        for k in 0..8u32 {
            for mult in 1..5u64 {
                let a = mult << (k + 1);
                assert_eq!(act_on_gamma(a, k, &t).certified_value().unwrap(), k);
            }
        }
    }

    #[test]
    fn uncertified_at_top() {
        let t = tower(4);
        let r = act_on_gamma(1 << 4, 4, &t);
        assert!(!r.certified);
        assert!(r.certified_value().is_err());
        assert!(matches!(
            in_range(3, 4, &t),
            Err(Error::InsufficientTables { .. })
        ));
    }

    #[test]
    fn least_witnesses() {
        let t = tower(12);
        assert_eq!(least_range_witness(1, &t).unwrap(), 1);
        // brute scan over the doubling condition
        for k in 1..=11u32 {
            let c = least_range_witness(k, &t).unwrap();
            let brute = (1u64..)
                .find(|&c| t.period(k + 1, c) == 2 * t.period(k, c))
                .unwrap();
            assert_eq!(c, brute);
            if k >= 2 {
                assert!(c < 1 << (k - 1));
            }
        }
        assert!(least_range_witness(0, &t).is_err());
    }

    #[test]
    fn act_matches_period_characterization() {
        let t = tower(12);
        for n in 1..12u32 {
            for a in 1..(1u64 << n) {
                for k in 0..n {
                    let r = act_on_gamma(a, k, &t);
                    if !r.certified {
                        continue;
                    }
                    let m = r.value.0;
                    assert!(t.period(m, a) <= 1 << k);
                    assert!(t.period(m + 1, a) > 1 << k);
                }
            }
        }
    }
}
