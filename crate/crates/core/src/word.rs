//! Terms of the free one-generated left-distributive algebra.
//!
//! Expression syntax: `1` is the generator, `*` is left associative
//! (`a*b*c` means `(a*b)*c`), parentheses group, and a decimal literal `k`
//! stands for the integer word `k` (`1`, `1*1`, `(1*1)*1`, ..).

use std::fmt;
use std::str::FromStr;

use crate::crit::{CertifiedIndex, Gamma};
use crate::error::{Error, Result};
use crate::table::LaverTable;
use crate::tower::Tower;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Word {
    Gen,
    App(Box<Word>, Box<Word>),
}

impl Word {
    pub fn app(left: Word, right: Word) -> Word {
        Word::App(Box::new(left), Box::new(right))
    }

    /// The integer word `k >= 1`: `1 = j`, `k + 1 = k * j`.
    pub fn integer(k: u64) -> Result<Word> {
        if k == 0 {
            return Err(Error::InvalidArgument("integer words start at 1".into()));
        }
        let mut w = Word::Gen;
        for _ in 1..k {
            w = Word::app(w, Word::Gen);
        }
        Ok(w)
    }

    pub fn size(&self) -> usize {
        let mut stack = vec![self];
        let mut count = 0;
        while let Some(w) = stack.pop() {
            count += 1;
            if let Word::App(l, r) = w {
                stack.push(l);
                stack.push(r);
            }
        }
        count
    }

    /// `[w]_n`, evaluated bottom-up in `table`.
    pub fn eval(&self, table: &LaverTable) -> u32 {
        let one = (1 % table.size()) as u32;
        // explicit post-order so deep integer words don't overflow the stack
        enum Step<'a> {
            Visit(&'a Word),
            Combine,
        }
        let mut work = vec![Step::Visit(self)];
        let mut values: Vec<u32> = Vec::new();
        while let Some(step) = work.pop() {
            match step {
                Step::Visit(Word::Gen) => values.push(one),
                Step::Visit(Word::App(l, r)) => {
                    work.push(Step::Combine);
                    work.push(Step::Visit(r));
                    work.push(Step::Visit(l));
                }
                Step::Combine => {
                    let b = values.pop().expect("right operand");
                    let a = values.pop().expect("left operand");
                    values.push(table.op(a, b));
                }
            }
        }
        values.pop().expect("non-empty word")
    }

    /// The signature: the largest `n` with `[w]_n = 0`.
    ///
    /// Certified when some rank in the tower shows `[w]_{n+1} != 0`.
    pub fn signature(&self, tower: &Tower) -> CertifiedIndex {
        let bound = tower.max_rank();
        // [w]_0 = 0 always, and a nonzero value stays nonzero at higher ranks
        for m in 1..=bound {
            let t = tower.table(m).expect("rank within tower");
            if self.eval(t) != 0 {
                return CertifiedIndex {
                    value: Gamma(m - 1),
                    certified: true,
                    bound: Some(bound),
                };
            }
        }
        CertifiedIndex {
            value: Gamma(bound),
            certified: false,
            bound: Some(bound),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // walk the left spine iteratively; only right operands recurse
        let mut rights = Vec::new();
        let mut head = self;
        while let Word::App(l, r) = head {
            rights.push(&**r);
            head = l;
        }
        f.write_str("1")?;
        for r in rights.into_iter().rev() {
            match r {
                Word::Gen => f.write_str("*1")?,
                _ => write!(f, "*({r})")?,
            }
        }
        Ok(())
    }
}

impl Drop for Word {
    fn drop(&mut self) {
        let mut stack = Vec::new();
        if let Word::App(l, r) = self {
            stack.push(std::mem::replace(&mut **l, Word::Gen));
            stack.push(std::mem::replace(&mut **r, Word::Gen));
        }
        while let Some(mut w) = stack.pop() {
            if let Word::App(l, r) = &mut w {
                stack.push(std::mem::replace(&mut **l, Word::Gen));
                stack.push(std::mem::replace(&mut **r, Word::Gen));
            }
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let w = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(w)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Word> {
        let mut w = self.term()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let r = self.term()?;
            w = Word::app(w, r);
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let k: u64 = text.parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: "integer literal too large".into(),
                })?;
                if k == 0 || k > 1 << 20 {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "integer literals must be in 1..=2^20".into(),
                    });
                }
                Word::integer(k)
            }
            Some(_) => Err(self.error("expected '1', an integer or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_left_associative() {
        let w: Word = "1*1*1".parse().unwrap();
        assert_eq!(w, Word::app(Word::app(Word::Gen, Word::Gen), Word::Gen));
        let w: Word = "1*(1*1)".parse().unwrap();
        assert_eq!(w, Word::app(Word::Gen, Word::app(Word::Gen, Word::Gen)));
        assert_eq!("3".parse::<Word>().unwrap(), Word::integer(3).unwrap());
        assert_eq!(" ( 1 ) ".parse::<Word>().unwrap(), Word::Gen);
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "*", "1*", "(1", "1)", "0", "1 1", "x"] {
            assert!(
                matches!(bad.parse::<Word>(), Err(Error::Parse { .. })),
                "{bad:?} should fail"
            );
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["1", "1*1*1", "1*(1*1)", "(1*1)*(1*1)*1"] {
            let w: Word = s.parse().unwrap();
            assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        }
    }

    #[test]
    fn evaluation() {
        let t3 = LaverTable::build(3).unwrap();
        assert_eq!(Word::Gen.eval(&t3), 1);
        let w: Word = "(1*1)*(1*1)".parse().unwrap();
        assert_eq!(w.eval(&t3), 4);
        for rank in 0..=6 {
            let t = LaverTable::build(rank).unwrap();
            for k in 1..70u64 {
                assert_eq!(
                    Word::integer(k).unwrap().eval(&t) as u64,
                    k % t.size(),
                    "k = {k} in A_{rank}"
                );
            }
        }
    }

    #[test]
    fn deep_words_evaluate() {
        let t = LaverTable::build(10).unwrap();
        let w = Word::integer(200_000).unwrap();
        assert_eq!(w.eval(&t) as u64, 200_000 % 1024);
        assert_eq!(w.size(), 2 * 200_000 - 1);
        assert!(w.to_string().starts_with("1*1*1"));
    }

    #[test]
    fn signatures() {
        let tower = Tower::build(8).unwrap();
        let s = Word::Gen.signature(&tower);
        assert_eq!(s.value, Gamma(0));
        assert!(s.certified);
        let s = Word::integer(12).unwrap().signature(&tower);
        assert_eq!((s.value, s.certified), (Gamma(2), true));
        let s = Word::integer(256).unwrap().signature(&tower);
        assert_eq!((s.value, s.certified), (Gamma(8), false));
    }
}
