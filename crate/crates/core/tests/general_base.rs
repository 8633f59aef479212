//! The machinery over a base group that is not free: the power quotient of
//! a presented group feeds the model bundle, and towers built on relators
//! keep certificate derivation working (relator indices shift).

use num_bigint::BigUint;

use grouptower::derivation::{derive_power_relation, verify};
use grouptower::finite_models::{quotient_by_powers, AuxiliaryModels, FiniteGroup};
use grouptower::hnn::{build_e_model, embed_check};
use grouptower::presentation::{build_tower, Presentation};
use grouptower::words::{Letter, Word};

/// ⟨a₁, a₂ ‖ a₁⟩ is infinite cyclic on a₂; its cube quotient has order 3.
fn collapsed_presentation() -> Presentation {
    let a1 = Letter::a(1, 0);
    let a2 = Letter::a(2, 0);
    Presentation::new(vec![a1, a2], vec![Word::single(a1)]).unwrap()
}

#[test]
fn power_quotient_of_presented_group() {
    let k = quotient_by_powers(&collapsed_presentation(), 3, 100_000).unwrap();
    assert_eq!(k.order(), 3);
    // a₁ dies, a₂ generates.
    assert_eq!(k.gen(0), k.identity());
    assert_ne!(k.gen(1), k.identity());
}

#[test]
fn model_bundle_over_a_collapsed_base() {
    let k = quotient_by_powers(&collapsed_presentation(), 3, 100_000).unwrap();
    let aux = AuxiliaryModels::build(2, 3, k).unwrap();
    assert_eq!(aux.p.order(), 2187 * 3);
    assert_eq!(aux.q.order(), 2187 * 3 * 27);

    // Kernel agreement over the collapsed base: a₁ is trivial, a₂ is not.
    let e = build_e_model(&aux).unwrap();
    let alphabet = [Letter::a(1, 0), Letter::a(2, 0)];
    let words = vec![
        Word::parse("a1.0").unwrap(),
        Word::parse("a2.0").unwrap(),
        Word::parse("a1.0 a2.0 a1.0").unwrap(),
        Word::parse("a2.0 a2.0 a2.0").unwrap(),
    ];
    let rows = embed_check(&aux, &e, &alphabet, &words).unwrap();
    assert!(rows.iter().all(|r| r.trivial_in_k == r.trivial_in_e));
    assert!(rows[0].trivial_in_k);
    assert!(!rows[1].trivial_in_k);
    assert!(!rows[2].trivial_in_k);
    assert!(rows[3].trivial_in_k);
}

#[test]
fn derivation_over_a_tower_with_base_relators() {
    // The base relator shifts all fresh relator indices by one; the
    // compiled certificates must still verify.
    let levels = build_tower(&collapsed_presentation(), &BigUint::from(3u32), 1).unwrap();
    let level1 = &levels[1];
    assert_eq!(level1.presentation.relators().len(), 17);
    for text in ["a1.0", "a2.0", "a1.0 a2.0^-1", "a2.0 a1.0 a2.0"] {
        let w = Word::parse(text).unwrap();
        let cert = derive_power_relation(level1, &w).unwrap();
        let report = verify(&level1.presentation, &cert).unwrap();
        assert!(report.accepted, "failed for {text}: {report:?}");
    }
}
