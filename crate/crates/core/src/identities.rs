//! Structural identities of the tables and of the critical-point action,
//! run through the same sweep driver as the conjectures.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::crit::act_on_gamma;
use crate::error::{Error, Result};
use crate::report::{sweep, Check, Outcome, SweepOptions, SweepResult, Witness};
use crate::tower::Tower;

/// Ranks up to this one are swept exhaustively by the triple identities.
pub const EXHAUSTIVE_TRIPLES_MAX_RANK: u32 = 6;
/// Triples sampled per rank above that.
pub const RANDOM_TRIPLES: u64 = 1_000_000;
const TRIPLES_PER_CHUNK: u64 = 1000;
/// Ranks up to this one check the homomorphism over every column.
pub const EXHAUSTIVE_HOM_MAX_RANK: u32 = 8;

fn pow2(k: u32) -> u64 {
    1u64 << k
}

fn verdict(ok: bool, w: impl FnOnce() -> Witness) -> Outcome {
    if ok {
        Outcome::Holds
    } else {
        Outcome::Violated(w())
    }
}

/// Row shape in `A_n`, the fixed periods, period evolution into `A_{n+1}`,
/// the shift law and the doubling witness, at element `a < 2^n`.
pub fn periods_at(n: u32, a: u64, tower: &Tower) -> Result<Outcome> {
    let an = tower.table(n)?;
    if let Err(msg) = an.check_row(a as u32) {
        return Ok(Outcome::Violated(
            Witness::new()
                .with("a", a)
                .with("row_ok", 0u64)
                .with("len", msg.len() as u64),
        ));
    }
    let size = pow2(n);
    let p = tower.period(n, a);
    let fixed = match a {
        0 => p == size,
        _ if a == size - 1 => p == 1,
        _ => (a != size / 2 || p == size / 2) && p > 1 && p < size,
    };
    let up = tower.period(n + 1, a);
    let evolves = up == p || up == 2 * p;
    let shift = tower.period(n + 1, a + size) == p;
    // when the period doubles, a * p_n(a) = 2^n in A_{n+1}
    let witness = up != 2 * p || tower.apply(n + 1, a, p) as u64 == size;
    Ok(verdict(fixed && evolves && shift && witness, || {
        Witness::new()
            .with("a", a)
            .with("period_n", p)
            .with("period_n_plus_1", up)
            .with("period_shifted", tower.period(n + 1, a + size))
            .with("at_period", tower.apply(n + 1, a, p))
    }))
}

/// Reduction `A_{n+1} -> A_n` at row `a < 2^(n+1)`.
pub fn hom_at(n: u32, a: u64, tower: &Tower) -> Result<Outcome> {
    let cols = if n <= EXHAUSTIVE_HOM_MAX_RANK {
        pow2(n + 1)
    } else {
        // both sides are periodic in b with a period dividing p_{n+1}(a)
        tower.period(n + 1, a)
    };
    let mask = pow2(n) - 1;
    for b in 0..=cols {
        let lhs = tower.apply(n + 1, a, b) as u64 & mask;
        let rhs = tower.apply(n, a & mask, b & mask) as u64;
        if lhs != rhs {
            return Ok(Outcome::Violated(
                Witness::new()
                    .with("a", a)
                    .with("b", b)
                    .with("lhs", lhs)
                    .with("rhs", rhs),
            ));
        }
    }
    Ok(Outcome::Holds)
}

/// `2^n * a = 2^n + a` in `A_{n+2}` for `1 <= a <= 2^n`; `a = 2^n` is
/// `2^n * 2^n = 2^(n+1)`.
pub fn powers_at(n: u32, a: u64, tower: &Tower) -> Result<Outcome> {
    let v = tower.apply(n + 2, pow2(n), a) as u64;
    Ok(verdict(v == pow2(n) + a, || {
        Witness::new().with("a", a).with("value", v)
    }))
}

pub fn ld_triple(n: u32, a: u64, b: u64, c: u64, tower: &Tower) -> Outcome {
    let t = tower.table(n).expect("caller checked the rank");
    let (a32, b32, c32) = (a as u32, b as u32, c as u32);
    let lhs = t.op(a32, t.op(b32, c32));
    let rhs = t.op(t.op(a32, b32), t.op(a32, c32));
    verdict(lhs == rhs, || {
        Witness::new()
            .with("a", a)
            .with("b", b)
            .with("c", c)
            .with("lhs", lhs)
            .with("rhs", rhs)
    })
}

pub fn compose_triple(n: u32, a: u64, b: u64, c: u64, tower: &Tower) -> Outcome {
    let t = tower.table(n).expect("caller checked the rank");
    let ab = tower.compose(n, a, b);
    let lhs = t.op(ab, c as u32);
    let rhs = t.op(a as u32, t.op(b as u32, c as u32));
    verdict(lhs == rhs, || {
        Witness::new()
            .with("a", a)
            .with("b", b)
            .with("c", c)
            .with("lhs", lhs)
            .with("rhs", rhs)
    })
}

type Triple = fn(u32, u64, u64, u64, &Tower) -> Outcome;

/// First violation among the triples of one sweep point: row `a` when
/// exhaustive, otherwise a seeded chunk of random triples.
fn triple_point(f: Triple, n: u32, point: u64, tower: &Tower) -> Outcome {
    let size = pow2(n);
    if n <= EXHAUSTIVE_TRIPLES_MAX_RANK {
        for b in 0..size {
            for c in 0..size {
                if let v @ Outcome::Violated(_) = f(n, point, b, c, tower) {
                    return v;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(((n as u64) << 32) | point);
        for _ in 0..TRIPLES_PER_CHUNK {
            let (a, b, c) = (
                rng.gen_range(0..size),
                rng.gen_range(0..size),
                rng.gen_range(0..size),
            );
            if let v @ Outcome::Violated(_) = f(n, a, b, c, tower) {
                return v;
            }
        }
    }
    Outcome::Holds
}

fn triples(f: Triple, n: u32, tower: &Tower, opts: &SweepOptions) -> Result<SweepResult> {
    let exhaustive = n <= EXHAUSTIVE_TRIPLES_MAX_RANK;
    let points = if exhaustive {
        pow2(n)
    } else {
        RANDOM_TRIPLES / TRIPLES_PER_CHUNK
    };
    let mut r = sweep(0, points, opts, |p| Ok(triple_point(f, n, p, tower)))?;
    r.checked = if exhaustive {
        pow2(3 * n)
    } else {
        RANDOM_TRIPLES
    };
    r.qualifying = r.checked;
    Ok(r)
}

pub fn top_row_at(n: u32, tower: &Tower) -> Outcome {
    let a = pow2(n) - 1;
    let g0 = act_on_gamma(a, 0, tower);
    let g1 = act_on_gamma(a, 1, tower);
    let ok = g0.certified && g0.value.0 == n && g1.certified && g1.value.0 == n + 1;
    verdict(ok, || {
        Witness::new()
            .with("a", a)
            .with("act_0", g0.value.0)
            .with("act_1", g1.value.0)
            .with("certified", (g0.certified && g1.certified) as u64)
    })
}

pub fn crit_below_at(n: u32, a: u64, tower: &Tower) -> Outcome {
    let g = act_on_gamma(a, 0, tower);
    verdict(g.certified && g.value.0 < n, || {
        Witness::new()
            .with("a", a)
            .with("act_0", g.value.0)
            .with("certified", g.certified as u64)
    })
}

pub(crate) fn run(check: Check, n: u32, tower: &Tower, opts: &SweepOptions) -> Result<SweepResult> {
    match check {
        Check::Periods => sweep(0, pow2(n), opts, |a| periods_at(n, a, tower)),
        Check::Hom => sweep(0, pow2(n + 1), opts, |a| hom_at(n, a, tower)),
        Check::Powers => sweep(1, pow2(n) + 1, opts, |a| powers_at(n, a, tower)),
        Check::Ld => triples(ld_triple, n, tower, opts),
        Check::Compose => triples(compose_triple, n, tower, opts),
        Check::TopRow => sweep(0, 1, opts, |_| Ok(top_row_at(n, tower))),
        Check::CritBelow => sweep(0, pow2(n) - 1, opts, |a| Ok(crit_below_at(n, a, tower))),
        other => Err(Error::InvalidArgument(format!(
            "{other} is not a structural identity"
        ))),
    }
}

pub(crate) fn revalidate(check: Check, n: u32, w: &Witness, tower: &Tower) -> Result<Outcome> {
    let field = |k: &str| {
        w.get(k)
            .ok_or_else(|| Error::InvalidArgument(format!("witness has no '{k}'")))
    };
    Ok(match check {
        Check::Periods => periods_at(n, field("a")?, tower)?,
        Check::Hom => {
            let (a, b) = (field("a")?, field("b")?);
            let mask = pow2(n) - 1;
            let lhs = tower.apply(n + 1, a, b) as u64 & mask;
            let rhs = tower.apply(n, a & mask, b & mask) as u64;
            verdict(lhs == rhs, || {
                Witness::new()
                    .with("a", a)
                    .with("b", b)
                    .with("lhs", lhs)
                    .with("rhs", rhs)
            })
        }
        Check::Powers => powers_at(n, field("a")?, tower)?,
        Check::Ld => ld_triple(n, field("a")?, field("b")?, field("c")?, tower),
        Check::Compose => compose_triple(n, field("a")?, field("b")?, field("c")?, tower),
        Check::TopRow => top_row_at(n, tower),
        Check::CritBelow => crit_below_at(n, field("a")?, tower),
        other => {
            return Err(Error::InvalidArgument(format!(
                "{other} is not a structural identity"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjectures::verify;

    #[test]
    fn identities_hold_on_small_ranks() {
        let tower = Tower::build(10).unwrap();
        let opts = SweepOptions::default();
        for check in [
            Check::Periods,
            Check::Hom,
            Check::Ld,
            Check::Powers,
            Check::Compose,
            Check::TopRow,
            Check::CritBelow,
        ] {
            for n in 0..=7 {
                if check.required_rank(n) > tower.max_rank() {
                    continue;
                }
                let r = verify(check, n, &tower, &opts).unwrap();
                assert!(r.is_verified(), "{r}: {:?}", r.counterexamples);
            }
        }
    }

    #[test]
    fn triple_counts() {
        let tower = Tower::build(8).unwrap();
        let opts = SweepOptions::default();
        assert_eq!(
            verify(Check::Ld, 4, &tower, &opts).unwrap().checked,
            1 << 12
        );
        assert_eq!(
            verify(Check::Ld, 7, &tower, &opts).unwrap().checked,
            RANDOM_TRIPLES
        );
    }

    #[test]
    fn random_triples_are_worker_independent() {
        let tower = Tower::build(9).unwrap();
        let one = SweepOptions {
            workers: 1,
            ..SweepOptions::default()
        };
        let many = SweepOptions {
            workers: 4,
            ..SweepOptions::default()
        };
        let a = verify(Check::Ld, 9, &tower, &one).unwrap();
        let b = verify(Check::Ld, 9, &tower, &many).unwrap();
        assert_eq!(
            (a.status, a.checked, a.qualifying),
            (b.status, b.checked, b.qualifying)
        );
    }

    #[test]
    fn broken_identity_is_reported() {
        let tower = Tower::build(5).unwrap();
        // a * (b * c) against (a * b) * c is not an identity of A_n
        fn assoc(n: u32, a: u64, b: u64, c: u64, tower: &Tower) -> Outcome {
            let t = tower.table(n).unwrap();
            let (a, b, c) = (a as u32, b as u32, c as u32);
            verdict(t.op(a, t.op(b, c)) == t.op(t.op(a, b), c), || {
                Witness::new().with("a", a as u64)
            })
        }
        let r = triples(assoc, 3, &tower, &SweepOptions::default()).unwrap();
        assert!(!r.violations.is_empty());
    }
}
