//! Symbolic ordinals between consecutive critical points, and the recursion
//! that lists them interval by interval.
//!
//! An interval `n` holds the ordinals strictly between `γ_n` and `γ_{n+1}`.
//! Each is written `a"γ_i`: `1 <= a < 2^n`, `i >= 1`, and `a γ_i = γ_{n+1}`.
//! Matching uses representation equality only; no ordinal order is
//! computed anywhere.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::crit::{act_on_gamma, in_range};
use crate::error::{Error, Result};
use crate::tower::Tower;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairRep {
    pub coef: u64,
    pub cof: u32,
    pub interval: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OrdinalRep {
    Crit { gamma: u32 },
    Pair(PairRep),
}

impl OrdinalRep {
    pub fn crit(n: u32) -> Self {
        OrdinalRep::Crit { gamma: n }
    }

    /// `a"γ_i` in interval `n`, with the static bounds checked.
    pub fn pair(coef: u64, cof: u32, interval: u32) -> Result<Self> {
        if coef == 0 || interval >= 64 || coef >= 1u64 << interval {
            return Err(Error::InvalidRepresentation(format!(
                "coefficient {coef} is outside 1..2^{interval}"
            )));
        }
        if cof == 0 {
            return Err(Error::InvalidRepresentation(
                "cofinality index must be at least 1".into(),
            ));
        }
        Ok(OrdinalRep::Pair(PairRep {
            coef,
            cof,
            interval,
        }))
    }

    /// TeX display-math form, e.g. `$$4"\gamma_{3}$$`.
    pub fn tex(&self) -> String {
        match self {
            OrdinalRep::Crit { gamma } => format!("$$\\gamma_{{{gamma}}}$$"),
            OrdinalRep::Pair(p) => format!("$${}\"\\gamma_{{{}}}$$", p.coef, p.cof),
        }
    }
}

impl fmt::Display for OrdinalRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdinalRep::Crit { gamma } => write!(f, "γ_{gamma}"),
            OrdinalRep::Pair(p) => write!(f, "{}\"γ_{}", p.coef, p.cof),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalEnumeration {
    pub n: u32,
    pub entries: Vec<PairRep>,
}

impl IntervalEnumeration {
    /// The last entry, whose successor is `γ_{n+1}`; `None` for the empty
    /// interval 0.
    pub fn special(&self) -> Option<PairRep> {
        self.entries.last().copied()
    }
}

/// `c` applied to `x`, landing in interval `n`. `None` when the image is
/// not a pair of interval `n`: its coefficient falls in `[2^n, 2^(n+1))`
/// or its cofinality is not below `γ_{n+1}`.
///
/// Needs tables through `A_{n+1}`.
pub fn image(c: u64, x: &OrdinalRep, n: u32, tower: &Tower) -> Result<Option<OrdinalRep>> {
    tower.require(n + 1, || format!("image into interval {n}"))?;
    match *x {
        OrdinalRep::Crit { gamma } => {
            let g = act_on_gamma(c, gamma, tower);
            if !g.certified {
                return Err(Error::Uncertified(format!(
                    "{c} γ_{gamma} is at least {}",
                    g.value
                )));
            }
            Ok(Some(OrdinalRep::crit(g.value.0)))
        }
        OrdinalRep::Pair(p) => {
            let d = tower.apply(n + 1, c, p.coef) as u64;
            let g = act_on_gamma(c, p.cof, tower);
            if !g.certified || g.value.0 > n || d >= 1u64 << n || d == 0 {
                return Ok(None);
            }
            Ok(Some(OrdinalRep::Pair(PairRep {
                coef: d,
                cof: g.value.0,
                interval: n,
            })))
        }
    }
}

/// Lists interval `n`. `specials[j - 1]` must be the special ordinal below
/// `γ_j` for `j = 1..=n` (`γ_0` below `γ_1`).
pub fn enumerate_interval(
    n: u32,
    specials: &[OrdinalRep],
    tower: &Tower,
) -> Result<IntervalEnumeration> {
    if (specials.len() as u64) < n as u64 {
        return Err(Error::InvalidArgument(format!(
            "interval {n} needs {n} special ordinals, got {}",
            specials.len()
        )));
    }
    tower.require(n + 1, || format!("enumerate interval {n}"))?;
    let mut entries = Vec::new();
    if n == 0 {
        return Ok(IntervalEnumeration { n, entries });
    }
    let cap = 1u64 << n;
    let mut current = OrdinalRep::crit(n);
    'next: loop {
        for c in (1..1u64 << n).rev() {
            let mut hit = None;
            for j in 1..=n {
                if image(c, &specials[j as usize - 1], n, tower)? == Some(current) {
                    if hit.is_some() {
                        return Err(Error::Ambiguous {
                            interval: n,
                            coef: c,
                            cofinalities: (1..=n)
                                .filter(|&j| {
                                    matches!(
                                        image(c, &specials[j as usize - 1], n, tower),
                                        Ok(Some(x)) if x == current
                                    )
                                })
                                .collect(),
                        });
                    }
                    hit = Some(j);
                }
            }
            if let Some(j) = hit {
                if entries.len() as u64 == cap {
                    return Err(Error::IterationCap { interval: n, cap });
                }
                let p = PairRep {
                    coef: c,
                    cof: j,
                    interval: n,
                };
                entries.push(p);
                current = OrdinalRep::Pair(p);
                continue 'next;
            }
        }
        break;
    }
    Ok(IntervalEnumeration { n, entries })
}

/// Memoizes intervals and their specials bottom-up.
pub struct Enumerator<'t> {
    tower: &'t Tower,
    /// `specials[j - 1]` is special below `γ_j`.
    specials: Vec<OrdinalRep>,
    intervals: Vec<IntervalEnumeration>,
}

impl<'t> Enumerator<'t> {
    pub fn new(tower: &'t Tower) -> Self {
        Enumerator {
            tower,
            specials: vec![OrdinalRep::crit(0)],
            intervals: Vec::new(),
        }
    }

    pub fn tower(&self) -> &'t Tower {
        self.tower
    }

    pub fn interval(&mut self, n: u32) -> Result<&IntervalEnumeration> {
        while self.intervals.len() <= n as usize {
            let m = self.intervals.len() as u32;
            let e = enumerate_interval(m, &self.specials, self.tower)?;
            if m >= 1 {
                let s = match e.special() {
                    Some(p) => OrdinalRep::Pair(p),
                    None => OrdinalRep::crit(m),
                };
                self.specials.push(s);
            }
            self.intervals.push(e);
        }
        Ok(&self.intervals[n as usize])
    }

    /// The special ordinal below `γ_j`, `j >= 1`.
    pub fn special_below(&mut self, j: u32) -> Result<OrdinalRep> {
        if j == 0 {
            return Err(Error::InvalidArgument(
                "nothing is special below γ_0".into(),
            ));
        }
        if j >= 2 {
            self.interval(j - 1)?;
        }
        Ok(self.specials[j as usize - 1])
    }

    pub fn specials(&self) -> &[OrdinalRep] {
        &self.specials
    }

    /// `γ_0, γ_1, interval 1, γ_2, .., γ_{N-1}, interval N-1`.
    pub fn enumerate_below(&mut self, below: u32) -> Result<Vec<OrdinalRep>> {
        let mut out = Vec::new();
        for n in 0..below {
            out.push(OrdinalRep::crit(n));
            let e = self.interval(n)?;
            out.extend(e.entries.iter().map(|&p| OrdinalRep::Pair(p)));
        }
        Ok(out)
    }

    pub fn is_special(&mut self, x: &PairRep) -> Result<bool> {
        let e = self.interval(x.interval)?;
        match e.entries.iter().position(|p| p == x) {
            Some(i) => Ok(i + 1 == e.entries.len()),
            None => Err(Error::InvalidRepresentation(format!(
                "{} is not listed in interval {}",
                OrdinalRep::Pair(*x),
                x.interval
            ))),
        }
    }

    /// Checks the enumeration invariants of interval `n`. Returns one
    /// message per failure. Needs tables through `A_{n+2}`.
    pub fn check_invariants(&mut self, n: u32) -> Result<Vec<String>> {
        self.tower
            .require(n + 2, || format!("check interval {n}"))?;
        let e = self.interval(n)?.clone();
        let tower = self.tower;
        let mut bad = Vec::new();
        if n == 0 {
            if !e.entries.is_empty() {
                bad.push("interval 0 is not empty".to_string());
            }
            return Ok(bad);
        }
        match e.entries.first() {
            Some(p) if p.coef == (1u64 << n) - 1 && p.cof == 1 => {}
            Some(p) => bad.push(format!("first entry is {}", OrdinalRep::Pair(*p))),
            None => bad.push("interval is empty".to_string()),
        }
        for w in e.entries.windows(2) {
            if w[1].coef >= w[0].coef {
                bad.push(format!(
                    "coefficients do not decrease at {}",
                    OrdinalRep::Pair(w[1])
                ));
            }
        }
        let mut prev = OrdinalRep::crit(n);
        for p in &e.entries {
            let s = self.specials[p.cof as usize - 1];
            if image(p.coef, &s, n, tower)? != Some(prev) {
                bad.push(format!(
                    "{} applied to the special below γ_{} is not {prev}",
                    p.coef, p.cof
                ));
            }
            prev = OrdinalRep::Pair(*p);
            let g = act_on_gamma(p.coef, p.cof, tower);
            if !g.certified || g.value.0 != n + 1 {
                bad.push(format!(
                    "{} γ_{} is {} rather than γ_{}",
                    p.coef,
                    p.cof,
                    g.value,
                    n + 1
                ));
            }
            if !in_range(p.coef, n + 1, tower)? {
                bad.push(format!("γ_{} is not in the range of {}", n + 1, p.coef));
            }
        }
        let mut seen: Vec<(u64, u32)> = e.entries.iter().map(|p| (p.coef, p.cof)).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != e.entries.len() {
            bad.push("repeated representation".to_string());
        }
        Ok(bad)
    }
}

/// One ordinal per line in the `a"γ_i` notation.
pub fn render_text(list: &[OrdinalRep]) -> String {
    list.iter().map(|x| format!("{x}\n")).collect()
}

/// One ordinal per line in TeX display-math form.
pub fn render_tex(list: &[OrdinalRep]) -> String {
    list.iter().map(|x| x.tex() + "\n").collect()
}
