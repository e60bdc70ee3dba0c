//! Verification reports and the deterministic sweep driver shared by the
//! conjecture and identity checks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every sweep the crate can run, by its command-line id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Th,
    Wth,
    Wth1,
    Wth2,
    Wth3,
    Twin,
    Uh,
    Wuh,
    Lemma53,
    Lemma54,
    Lemma59,
    TwinUpper,
    Periods,
    Hom,
    Ld,
    Powers,
    Compose,
    TopRow,
    CritBelow,
}

impl Check {
    pub const ALL: [Check; 19] = [
        Check::Th,
        Check::Wth,
        Check::Wth1,
        Check::Wth2,
        Check::Wth3,
        Check::Twin,
        Check::Uh,
        Check::Wuh,
        Check::Lemma53,
        Check::Lemma54,
        Check::Lemma59,
        Check::TwinUpper,
        Check::Periods,
        Check::Hom,
        Check::Ld,
        Check::Powers,
        Check::Compose,
        Check::TopRow,
        Check::CritBelow,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Check::Th => "th",
            Check::Wth => "wth",
            Check::Wth1 => "wth1",
            Check::Wth2 => "wth2",
            Check::Wth3 => "wth3",
            Check::Twin => "twin",
            Check::Uh => "uh",
            Check::Wuh => "wuh",
            Check::Lemma53 => "lemma53",
            Check::Lemma54 => "lemma54",
            Check::Lemma59 => "lemma59",
            Check::TwinUpper => "twin-upper",
            Check::Periods => "periods",
            Check::Hom => "hom",
            Check::Ld => "ld",
            Check::Powers => "powers",
            Check::Compose => "compose",
            Check::TopRow => "top-row",
            Check::CritBelow => "crit-below",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Check::Th => "threshold hypothesis",
            Check::Wth => "weak threshold hypothesis",
            Check::Wth1 => "weak threshold hypothesis, form [ac]_n",
            Check::Wth2 => "weak threshold hypothesis, form [a o c]_n",
            Check::Wth3 => "weak threshold hypothesis, form [a o c]_(n-1)",
            Check::Twin => "twin hypothesis (odd n)",
            Check::Uh => "uniqueness hypothesis",
            Check::Wuh => "weak uniqueness hypothesis",
            Check::Lemma53 => "stability of [ac] and [a o c] across ranks",
            Check::Lemma54 => "agreement of the five weak-threshold forms",
            Check::Lemma59 => "range shift by 2^(n-2) (even n)",
            Check::TwinUpper => "twin statement on the upper half (odd n)",
            Check::Periods => "period laws and the doubling witness",
            Check::Hom => "reduction mod 2^n is a homomorphism",
            Check::Ld => "left distributivity",
            Check::Powers => "2^n * 2^n = 2^(n+1) and 2^n * a = 2^n + a in A_(n+2)",
            Check::Compose => "(a o b) * c = a * (b * c)",
            Check::TopRow => "(2^n - 1) sends γ_0 to γ_n and γ_1 to γ_(n+1)",
            Check::CritBelow => "a < 2^n - 1 sends γ_0 below γ_n",
        }
    }

    /// Highest table rank the check needs at rank `n`.
    pub fn required_rank(self, n: u32) -> u32 {
        match self {
            Check::Ld | Check::Compose | Check::CritBelow => n,
            Check::TwinUpper | Check::Powers | Check::TopRow => n + 2,
            _ => n + 1,
        }
    }

    /// Whether `n` is in the check's domain.
    pub fn accepts_rank(self, n: u32) -> bool {
        match self {
            Check::Twin | Check::TwinUpper => n % 2 == 1,
            Check::Lemma59 => n >= 2 && n.is_multiple_of(2),
            Check::Periods
            | Check::Hom
            | Check::Ld
            | Check::Powers
            | Check::Compose
            | Check::TopRow
            | Check::CritBelow
            | Check::Th => true,
            _ => n >= 1,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Check> {
        Check::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Counterexample,
    ResourceLimited,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Counterexample => "counterexample",
            Status::ResourceLimited => "resource-limited",
        })
    }
}

/// The data of one violation, keyed by name (`a`, `b`, `c`, `k`, periods ..).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Witness(pub BTreeMap<String, u64>);

impl Witness {
    pub fn new() -> Self {
        Witness::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<u64>) -> Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<u64> {
        self.0.get(key).copied()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: Check,
    pub rank: u32,
    pub status: Status,
    /// Size of the swept quantifier range (elements, pairs or triples).
    pub checked: u64,
    /// How many of those satisfied the hypothesis.
    pub qualifying: u64,
    pub total_counterexamples: u64,
    /// Canonically sorted, truncated to the sweep's reporting limit.
    pub counterexamples: Vec<Witness>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn resource_limited(check: Check, rank: u32) -> Self {
        VerificationReport {
            check,
            rank,
            status: Status::ResourceLimited,
            checked: 0,
            qualifying: 0,
            total_counterexamples: 0,
            counterexamples: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={}: {} ({} checked, {} qualifying",
            self.check, self.rank, self.status, self.checked, self.qualifying
        )?;
        if self.total_counterexamples > 0 {
            write!(f, ", {} counterexamples", self.total_counterexamples)?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    /// Reporting cap on counterexamples; `None` keeps all of them.
    pub max_counterexamples: Option<usize>,
    /// Restrict the `a < 2^n` forms of the weak threshold hypothesis to `a < 2^(n-1)`.
    pub narrow: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            workers: 0,
            max_counterexamples: Some(100),
            narrow: false,
        }
    }
}

/// Result of checking a single point of a quantifier range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Hypothesis not met.
    Excluded,
    Holds,
    Violated(Witness),
}

#[derive(Default)]
struct Tally {
    qualifying: u64,
    violations: Vec<(u64, Witness)>,
}

impl Tally {
    fn add(mut self, key: u64, outcome: Outcome) -> Self {
        match outcome {
            Outcome::Excluded => {}
            Outcome::Holds => self.qualifying += 1,
            Outcome::Violated(w) => {
                self.qualifying += 1;
                self.violations.push((key, w));
            }
        }
        self
    }

    #[cfg(feature = "parallel")]
    fn merge(mut self, other: Tally) -> Self {
        self.qualifying += other.qualifying;
        self.violations.extend(other.violations);
        self
    }
}

pub(crate) struct SweepResult {
    pub checked: u64,
    pub qualifying: u64,
    pub violations: Vec<(u64, Witness)>,
}

/// Runs `check` on every point of `lo..hi`, in parallel when enabled.
/// Violations come back sorted by point, independent of scheduling.
pub(crate) fn sweep<F>(lo: u64, hi: u64, opts: &SweepOptions, check: F) -> Result<SweepResult>
where
    F: Fn(u64) -> Result<Outcome> + Sync + Send,
{
    let hi = hi.max(lo);
    let tally = run_range(lo, hi, opts.workers, &check)?;
    let mut violations = tally.violations;
    violations.sort_by_key(|(k, _)| *k);
    Ok(SweepResult {
        checked: hi - lo,
        qualifying: tally.qualifying,
        violations,
    })
}

#[cfg(feature = "parallel")]
fn run_range<F>(lo: u64, hi: u64, workers: usize, check: &F) -> Result<Tally>
where
    F: Fn(u64) -> Result<Outcome> + Sync + Send,
{
    use rayon::prelude::*;

    if workers == 1 || hi - lo < 256 {
        return run_serial(lo, hi, check);
    }
    let job = || {
        (lo..hi)
            .into_par_iter()
            .try_fold(Tally::default, |t, a| Ok(t.add(a, check(a)?)))
            .try_reduce(Tally::default, |x, y| Ok(x.merge(y)))
    };
    if workers == 0 {
        job()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start {workers} workers: {e}")))?
            .install(job)
    }
}

#[cfg(not(feature = "parallel"))]
fn run_range<F>(lo: u64, hi: u64, _workers: usize, check: &F) -> Result<Tally>
where
    F: Fn(u64) -> Result<Outcome> + Sync + Send,
{
    run_serial(lo, hi, check)
}

fn run_serial<F>(lo: u64, hi: u64, check: &F) -> Result<Tally>
where
    F: Fn(u64) -> Result<Outcome>,
{
    (lo..hi).try_fold(Tally::default(), |t, a| Ok(t.add(a, check(a)?)))
}

/// Maps `f` over `lo..hi`, preserving order.
pub(crate) fn par_map<T, F>(lo: u64, hi: u64, opts: &SweepOptions, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let hi = hi.max(lo);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if opts.workers != 1 && hi - lo >= 256 {
            let job = || (lo..hi).into_par_iter().map(&f).collect::<Result<Vec<T>>>();
            return if opts.workers == 0 {
                job()
            } else {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(opts.workers)
                    .build()
                    .map_err(|e| {
                        Error::InvalidArgument(format!(
                            "cannot start {} workers: {e}",
                            opts.workers
                        ))
                    })?
                    .install(job)
            };
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = opts;
    (lo..hi).map(f).collect()
}

pub(crate) fn finish(
    check: Check,
    rank: u32,
    result: SweepResult,
    opts: &SweepOptions,
    elapsed: Duration,
) -> VerificationReport {
    let total = result.violations.len() as u64;
    let mut counterexamples: Vec<Witness> = result.violations.into_iter().map(|(_, w)| w).collect();
    if let Some(cap) = opts.max_counterexamples {
        counterexamples.truncate(cap);
    }
    VerificationReport {
        check,
        rank,
        status: if total == 0 {
            Status::Verified
        } else {
            Status::Counterexample
        },
        checked: result.checked,
        qualifying: result.qualifying,
        total_counterexamples: total,
        counterexamples,
        elapsed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.id().parse::<Check>().unwrap(), c);
        }
        assert!("nope".parse::<Check>().is_err());
    }

    #[test]
    fn sweep_is_sorted_and_worker_independent() {
        let check = |a: u64| -> Result<Outcome> {
            Ok(match a % 7 {
                0 => Outcome::Excluded,
                3 => Outcome::Violated(Witness::new().with("a", a)),
                _ => Outcome::Holds,
            })
        };
        let mut seen = Vec::new();
        for workers in [1, 2, 4, 0] {
            let opts = SweepOptions {
                workers,
                ..SweepOptions::default()
            };
            let r = sweep(0, 5000, &opts, check).unwrap();
            let keys: Vec<u64> = r.violations.iter().map(|(k, _)| *k).collect();
            assert!(keys.windows(2).all(|w| w[0] < w[1]));
            seen.push((r.qualifying, keys));
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn sweep_propagates_errors() {
        let r = sweep(0, 1000, &SweepOptions::default(), |a| {
            if a == 500 {
                Err(Error::InvalidArgument("boom".into()))
            } else {
                Ok(Outcome::Holds)
            }
        });
        assert!(r.is_err());
    }

    #[test]
    fn report_truncates_but_counts_everything() {
        let result = SweepResult {
            checked: 10,
            qualifying: 10,
            violations: (0..10).map(|a| (a, Witness::new().with("a", a))).collect(),
        };
        let opts = SweepOptions {
            max_counterexamples: Some(3),
            ..SweepOptions::default()
        };
        let r = finish(Check::Th, 4, result, &opts, Duration::ZERO);
        assert_eq!(r.status, Status::Counterexample);
        assert_eq!(r.total_counterexamples, 10);
        assert_eq!(r.counterexamples.len(), 3);
    }
}
