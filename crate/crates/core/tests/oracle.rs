//! Library results against a separate full-matrix construction that uses
//! the classical labelling `1..=2^n`, where `2^n` is a left identity.

use laver_core::omega::{image, OrdinalRep, PairRep};
use laver_core::{act_on_gamma, in_range, least_range_witness, LaverTable, Tower};

struct Matrix {
    n: u32,
    m: Vec<Vec<u64>>,
}

impl Matrix {
    fn build(n: u32) -> Matrix {
        let size = 1u64 << n;
        let mut m = vec![vec![0u64; size as usize + 1]; size as usize + 1];
        for b in 1..=size {
            m[size as usize][b as usize] = b;
        }
        for a in (1..size).rev() {
            m[a as usize][1] = a + 1;
            for b in 1..size {
                let prev = m[a as usize][b as usize];
                m[a as usize][b as usize + 1] = m[prev as usize][a as usize + 1];
            }
        }
        Matrix { n, m }
    }

    fn lift(&self, a: u64) -> u64 {
        let size = 1u64 << self.n;
        match a % size {
            0 => size,
            r => r,
        }
    }

    fn op(&self, a: u64, b: u64) -> u64 {
        self.m[self.lift(a) as usize][self.lift(b) as usize] % (1 << self.n)
    }

    fn period(&self, a: u64) -> u64 {
        let size = 1u64 << self.n;
        (1..=size).find(|&b| self.op(a, b) == 0).unwrap()
    }
}

#[test]
fn tables_agree_with_matrix() {
    for n in 0..=8 {
        let t = LaverTable::build(n).unwrap();
        let o = Matrix::build(n);
        for a in 0..t.size() {
            assert_eq!(t.period(a).unwrap(), o.period(a), "p_{n}({a})");
            for b in 1..=t.size() {
                assert_eq!(
                    t.apply(a, b).unwrap() as u64,
                    o.op(a, b),
                    "{a} * {b} in A_{n}"
                );
            }
        }
    }
}

#[test]
fn least_range_witness_of_gamma_3() {
    let tower = Tower::build(6).unwrap();
    let m3 = Matrix::build(3);
    let m4 = Matrix::build(4);
    let brute = (1u64..)
        .find(|&c| m4.period(c) == 2 * m3.period(c))
        .unwrap();
    assert_eq!(brute, 3);
    assert_eq!(least_range_witness(3, &tower).unwrap(), brute);
}

#[test]
fn act_against_matrix_periods() {
    let tower = Tower::build(10).unwrap();
    let ms: Vec<Matrix> = (0..=10).map(Matrix::build).collect();
    for a in 1..256u64 {
        for k in 0..6 {
            // largest m with p_m(a) <= 2^k
            let brute = (0..=10u32)
                .filter(|&m| ms[m as usize].period(a) <= 1 << k)
                .max()
                .unwrap();
            let r = act_on_gamma(a, k, &tower);
            assert_eq!(r.value.0, brute, "{a} γ_{k}");
            assert_eq!(r.certified, brute < 10);
        }
    }
    for a in 1..128u64 {
        for n in 1..9 {
            let brute = ms[n as usize + 1].period(a) == 2 * ms[n as usize].period(a);
            assert_eq!(in_range(a, n, &tower).unwrap(), brute);
        }
    }
}

#[test]
fn image_of_three_gamma_one() {
    let tower = Tower::build(5).unwrap();
    let m4 = Matrix::build(4);
    assert_eq!(m4.op(4, 3), 7);
    let x = OrdinalRep::Pair(PairRep {
        coef: 3,
        cof: 1,
        interval: 2,
    });
    let want = OrdinalRep::Pair(PairRep {
        coef: 7,
        cof: 1,
        interval: 3,
    });
    assert_eq!(image(4, &x, 3, &tower).unwrap(), Some(want));
}
