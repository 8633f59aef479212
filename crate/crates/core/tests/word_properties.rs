//! Property tests for the free-group word algebra.

use proptest::prelude::*;

use grouptower::words::{free_reduce, substitute_family, Family, Letter, Word};

fn arb_letter() -> impl Strategy<Value = (Letter, i8)> {
    (1u32..=2, prop_oneof![Just(1i8), Just(-1i8)])
        .prop_map(|(i, s)| (Letter::a(i, 0), s))
}

fn arb_raw_word(max_len: usize) -> impl Strategy<Value = Vec<(Letter, i8)>> {
    prop::collection::vec(arb_letter(), 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reduce_is_idempotent(raw in arb_raw_word(20)) {
        let once = free_reduce(&raw);
        let twice = free_reduce(once.letters());
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.is_reduced());
    }

    #[test]
    fn inverse_cancels(raw in arb_raw_word(20)) {
        let w = free_reduce(&raw);
        prop_assert!(w.multiply(&w.invert()).is_empty());
        prop_assert!(w.invert().multiply(&w).is_empty());
    }

    #[test]
    fn multiplication_bounds_length(a in arb_raw_word(15), b in arb_raw_word(15)) {
        let u = free_reduce(&a);
        let v = free_reduce(&b);
        prop_assert!(u.multiply(&v).len() <= u.len() + v.len());
    }

    #[test]
    fn substitution_commutes_with_multiply_and_invert(a in arb_raw_word(12), b in arb_raw_word(12)) {
        let u = free_reduce(&a);
        let v = free_reduce(&b);
        for family in [Family::B, Family::X] {
            let lhs = substitute_family(&u.multiply(&v), family).unwrap();
            let rhs = substitute_family(&u, family)
                .unwrap()
                .multiply(&substitute_family(&v, family).unwrap());
            prop_assert_eq!(lhs, rhs);
            let lhs = substitute_family(&u.invert(), family).unwrap();
            let rhs = substitute_family(&u, family).unwrap().invert();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn word_text_round_trips(raw in arb_raw_word(20)) {
        let w = free_reduce(&raw);
        prop_assert_eq!(Word::parse(&w.emit()).unwrap(), w);
    }

    #[test]
    fn conjugation_preserves_cyclic_core_length(raw in arb_raw_word(12), t in arb_raw_word(6)) {
        let w = free_reduce(&raw);
        let t = free_reduce(&t);
        let (_, core1) = w.cyclic_decompose();
        let (_, core2) = w.conjugate(&t).cyclic_decompose();
        prop_assert_eq!(core1.len(), core2.len());
    }
}
