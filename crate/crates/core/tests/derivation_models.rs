//! Randomized completeness and soundness checks for compiled power-relation
//! certificates, cross-checked against the finite models.

use std::sync::OnceLock;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grouptower::derivation::{derive_power_relation, verify, Step};
use grouptower::finite_models::{AuxiliaryModels, FiniteGroup};
use grouptower::hnn::{build_e_model, HnnData};
use grouptower::presentation::{build_tower, Presentation, TowerLevel};
use grouptower::words::{Letter, Word};

fn level_one() -> &'static TowerLevel {
    static LEVEL: OnceLock<TowerLevel> = OnceLock::new();
    LEVEL.get_or_init(|| {
        build_tower(&Presentation::free(2), &BigUint::from(3u32), 1)
            .unwrap()
            .remove(1)
    })
}

fn models() -> &'static (AuxiliaryModels, HnnData<grouptower::finite_models::PGroup>) {
    static MODELS: OnceLock<(AuxiliaryModels, HnnData<grouptower::finite_models::PGroup>)> =
        OnceLock::new();
    MODELS.get_or_init(|| {
        let aux = AuxiliaryModels::reference(2, 3).unwrap();
        let e = build_e_model(&aux).unwrap();
        (aux, e)
    })
}

pub fn random_reduced_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut letters: Vec<(Letter, i8)> = Vec::with_capacity(len);
    while letters.len() < len {
        let letter = Letter::a(rng.gen_range(1..=2), 0);
        let sign: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
        if letters.last() == Some(&(letter, -sign)) {
            continue;
        }
        letters.push((letter, sign));
    }
    Word::from_letters(letters)
}

#[test]
fn random_cubes_always_derive_and_verify() {
    let level = level_one();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..200 {
        let w = random_reduced_word(&mut rng, 5);
        let cert = derive_power_relation(level, &w).unwrap();
        assert_eq!(cert.start, w.pow(3));
        let report = verify(&level.presentation, &cert).unwrap();
        assert!(report.accepted, "failed for {w}: {report:?}");
    }
}

#[test]
fn certificate_starts_die_in_the_finite_models() {
    let (aux, e) = models();
    let level = level_one();
    let alphabet = [Letter::a(1, 0), Letter::a(2, 0)];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..40 {
        let w = random_reduced_word(&mut rng, 5);
        let cert = derive_power_relation(level, &w).unwrap();
        // The start word maps to the identity of K = H/H³ …
        let k_image = aux.eval_k(&alphabet, &cert.start).unwrap();
        assert_eq!(k_image, aux.k().identity());
        // … and to a trivial element of the HNN model over P.
        let image = e.word_from_base(aux.p.from_right(k_image));
        assert!(e.is_trivial(&image));
    }
}

#[test]
fn replay_length_scales_quadratically_in_word_length() {
    // The compiled proof moves each block past each other block once, so
    // the step count for fixed exponent grows like |W|²; spot-check that
    // doubling |W| stays within the quadratic envelope.
    let level = level_one();
    let short = derive_power_relation(level, &Word::parse("a1.0 a2.0").unwrap()).unwrap();
    let long = derive_power_relation(
        level,
        &Word::parse("a1.0 a2.0 a1.0 a2.0").unwrap(),
    )
    .unwrap();
    let ratio = long.steps.len() as f64 / short.steps.len() as f64;
    assert!(
        ratio <= 4.5,
        "expected at most ~4x steps for 2x letters, got {ratio}"
    );
}

#[test]
fn single_letter_step_count_is_stable() {
    // Pinned regression: the compiled certificate for a₁³ at n = 3.
    let level = level_one();
    let cert = derive_power_relation(level, &Word::parse("a1.0").unwrap()).unwrap();
    let report = verify(&level.presentation, &cert).unwrap();
    assert!(report.accepted);
    assert_eq!(cert.steps.len(), 23);
}

#[test]
fn oversized_exponents_are_rejected_not_hung() {
    // Level 3 carries step exponent 19683; the compiled proof would be
    // quadratic in it.
    let levels = build_tower(&Presentation::free(2), &BigUint::from(3u32), 3).unwrap();
    assert!(matches!(
        derive_power_relation(&levels[3], &Word::parse("a1.0").unwrap()),
        Err(grouptower::derivation::DerivationError::TooLarge(_))
    ));
    // Level 4 cannot even be materialized: the cⁿ relator is too long.
    assert!(build_tower(&Presentation::free(2), &BigUint::from(3u32), 4).is_err());
}

#[test]
fn derivation_works_at_higher_tower_levels() {
    // Level 2 applies the construction to the full 8-letter alphabet with
    // exponent 27; former fresh letters now play the base role.
    let levels = build_tower(&Presentation::free(2), &BigUint::from(3u32), 2).unwrap();
    let level2 = &levels[2];
    for text in ["a1.0", "c.1 y.1", "b1.1 x2.1^-1"] {
        let w = Word::parse(text).unwrap();
        let cert = derive_power_relation(level2, &w).unwrap();
        assert_eq!(cert.start, w.pow(27));
        let report = verify(&level2.presentation, &cert).unwrap();
        assert!(report.accepted, "failed for {text} at level 2: {report:?}");
    }
}

#[test]
fn verification_cost_tracks_replayed_length() {
    // Replay touches each state once per step; total replayed length is the
    // natural cost measure and must dominate the step count.
    let level = level_one();
    let cert = derive_power_relation(level, &Word::parse("a1.0 a2.0 a1.0^-1").unwrap()).unwrap();
    let mut state = cert.start.clone();
    let mut replayed = 0usize;
    for step in &cert.steps {
        state = grouptower::derivation::replay_step(&level.presentation, &state, step).unwrap();
        replayed += state.len();
    }
    assert!(state.is_empty());
    assert!(replayed >= cert.steps.len());
}

#[test]
fn tampered_certificates_are_rejected_with_a_step_index() {
    let level = level_one();
    let mut cert = derive_power_relation(level, &Word::parse("a1.0").unwrap()).unwrap();
    // Derange one step's position beyond the word length.
    let broken = cert.steps.len() / 2;
    cert.steps[broken] = Step::DeleteRelator {
        position: 9999,
        relator: 0,
        sign: 1,
    };
    let report = verify(&level.presentation, &cert).unwrap();
    assert!(!report.accepted);
    assert!(report.failing_step.is_some());
    assert!(report.failing_step.unwrap() <= broken);
}
