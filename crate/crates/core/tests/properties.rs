use proptest::prelude::*;

use laver_core::store::{decode, encode};
use laver_core::{LaverTable, Tower, Word};

fn tower() -> &'static Tower {
    use std::sync::OnceLock;
    static T: OnceLock<Tower> = OnceLock::new();
    T.get_or_init(|| Tower::build(11).unwrap())
}

fn word() -> impl Strategy<Value = Word> {
    Just(Word::Gen).prop_recursive(6, 64, 2, |inner| {
        (inner.clone(), inner).prop_map(|(l, r)| Word::app(l, r))
    })
}

proptest! {
    #[test]
    fn left_distributive(n in 0u32..=11, a: u64, b: u64, c: u64) {
        let t = tower().table(n).unwrap();
        let m = t.size();
        let (a, b, c) = ((a % m) as u32, (b % m) as u32, (c % m) as u32);
        prop_assert_eq!(t.op(a, t.op(b, c)), t.op(t.op(a, b), t.op(a, c)));
    }

    #[test]
    fn reduction_is_a_homomorphism(n in 0u32..11, a: u64, b: u64) {
        let mask = (1u64 << n) - 1;
        let up = tower().apply(n + 1, a, b) as u64;
        prop_assert_eq!(up & mask, tower().apply(n, a & mask, b & mask) as u64);
    }

    #[test]
    fn composition_acts_as_product(n in 1u32..=11, a: u64, b: u64, c: u64) {
        let t = tower().table(n).unwrap();
        let m = t.size();
        let (a, b, c) = (a % m, b % m, c % m);
        let ab = t.compose(a, b).unwrap();
        prop_assert_eq!(t.apply(ab as u64, c).unwrap(), t.apply(a, t.apply(b, c).unwrap() as u64).unwrap());
    }

    #[test]
    fn periods_stay_or_double(n in 0u32..11, a: u64) {
        let p = tower().period(n, a);
        let q = tower().period(n + 1, a);
        prop_assert!(q == p || q == 2 * p);
    }

    #[test]
    fn words_print_and_parse_back(w in word()) {
        let s = w.to_string();
        let back: Word = s.parse().unwrap();
        prop_assert_eq!(&back, &w);
        let t = tower().table(6).unwrap();
        prop_assert_eq!(back.eval(t), w.eval(t));
    }

    #[test]
    fn word_values_reduce_between_ranks(w in word(), n in 0u32..11) {
        let hi = w.eval(tower().table(n + 1).unwrap()) as u64;
        let lo = w.eval(tower().table(n).unwrap()) as u64;
        prop_assert_eq!(hi % (1 << n), lo);
    }

    #[test]
    fn cache_images_round_trip(n in 0u32..=10) {
        let t = LaverTable::build(n).unwrap();
        let bytes = encode(&t);
        prop_assert_eq!(decode(&bytes, std::path::Path::new("mem")).unwrap(), t);
    }

    #[test]
    fn any_single_byte_flip_is_caught(n in 1u32..=6, pos: usize, bit in 0u8..8) {
        let t = LaverTable::build(n).unwrap();
        let mut bytes = encode(&t);
        let i = pos % bytes.len();
        bytes[i] ^= 1 << bit;
        prop_assert!(decode(&bytes, std::path::Path::new("mem")).is_err());
    }
}
