//! Finite presentations, the main alphabet-tripling construction, and the
//! iterated tower it generates.
//!
//! One construction step takes `⟨𝒜 ‖ ℛ⟩` and an exponent `n` to a presentation
//! on `𝒜 ∪ ℬ ∪ 𝒳 ∪ {c, y}` whose new relators make conjugation by the fresh
//! letters act as controlled substitutions: `x_i c x_i⁻¹ = c b_i`,
//! `y b_i y⁻¹ = b_i a_i`, `cⁿ = 1`, plus the commutation schemas between the
//! families. Iterating the step with `n ↦ n³` yields the tower.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::words::{Family, Letter, Word, WordError};

/// Upper bound on the letters of a single materialized relator (the `cⁿ`
/// relator grows with the tower exponent schedule).
pub const MAX_RELATOR_LEN: u64 = 1 << 22;

/// The construction's headline guarantees are stated for odd base exponents
/// strictly above this bound; smaller exponents build desk-scale models.
pub const FULL_SCALE_EXPONENT: u64 = 1 << 16;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("alphabet letters must be pairwise distinct; `{0}` repeats")]
    DuplicateLetter(Letter),
    #[error("relator {0} is empty")]
    EmptyRelator(usize),
    #[error("relator {index} uses letter `{letter}` outside the alphabet")]
    LetterOutsideAlphabet { index: usize, letter: Letter },
    #[error("the construction needs at least two alphabet letters, got {0}")]
    AlphabetTooSmall(usize),
    #[error("the construction exponent must be at least 1, got {0}")]
    ExponentTooSmall(BigUint),
    #[error("tower base exponent must be odd and at least 3, got {0}")]
    BadBaseExponent(BigUint),
    #[error("relator of length {0} exceeds the materialization bound {MAX_RELATOR_LEN}")]
    RelatorTooLarge(BigUint),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
}

fn parse_err(line: usize, col: usize, message: impl Into<String>) -> PresentationError {
    PresentationError::Parse {
        line,
        col,
        message: message.into(),
    }
}

/// A finite presentation: an ordered alphabet and an ordered relator list.
/// Relators are freely reduced, nonempty, and use only alphabet letters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    alphabet: Vec<Letter>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(alphabet: Vec<Letter>, relators: Vec<Word>) -> Result<Presentation, PresentationError> {
        for (i, letter) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(letter) {
                return Err(PresentationError::DuplicateLetter(*letter));
            }
        }
        for (index, relator) in relators.iter().enumerate() {
            if relator.is_empty() {
                return Err(PresentationError::EmptyRelator(index));
            }
            debug_assert!(relator.is_reduced());
            for &(letter, _) in relator.letters() {
                if !alphabet.contains(&letter) {
                    return Err(PresentationError::LetterOutsideAlphabet { index, letter });
                }
            }
        }
        Ok(Presentation { alphabet, relators })
    }

    /// The free presentation on `a1.0 … am.0`.
    pub fn free(m: u32) -> Presentation {
        Presentation {
            alphabet: (1..=m).map(|i| Letter::a(i, 0)).collect(),
            relators: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn letter_position(&self, letter: Letter) -> Option<usize> {
        self.alphabet.iter().position(|&l| l == letter)
    }

    pub fn contains_word(&self, word: &Word) -> bool {
        word.letters()
            .iter()
            .all(|&(l, _)| self.alphabet.contains(&l))
    }

    /// SHA-256 of the emitted text under a fixed header; certificates pin
    /// the presentation they were derived over through this digest.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.emit_body().as_bytes());
        let bytes = hasher.finalize();
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn emit_body(&self) -> String {
        let mut out = String::new();
        out.push_str("gens:");
        for letter in &self.alphabet {
            out.push(' ');
            out.push_str(&letter.token());
        }
        out.push('\n');
        for relator in &self.relators {
            out.push_str(&relator.emit());
            out.push('\n');
        }
        out
    }
}

/// One floor of the tower: a presentation plus its exponent `N_j = N_0^{3^j}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TowerLevel {
    pub level: u32,
    pub presentation: Presentation,
    pub exponent: BigUint,
}

impl TowerLevel {
    pub fn emit(&self) -> String {
        format!(
            "level {} exponent {}\n{}",
            self.level,
            self.exponent,
            self.presentation.emit_body()
        )
    }

    pub fn parse(text: &str) -> Result<TowerLevel, PresentationError> {
        parse_tower_level(text)
    }
}

/// Applies the construction step to `p` with exponent `n`.
///
/// Fresh letters live one level above the deepest letter of `p`; `b_i` and
/// `x_i` are indexed by the position of the i-th letter in `p`'s alphabet,
/// so at later tower floors the whole current alphabet plays the `a` role.
pub fn main_construction(p: &Presentation, n: &BigUint) -> Result<Presentation, PresentationError> {
    let m = p.alphabet.len();
    if m < 2 {
        return Err(PresentationError::AlphabetTooSmall(m));
    }
    if n.is_zero() {
        return Err(PresentationError::ExponentTooSmall(n.clone()));
    }
    if *n > BigUint::from(MAX_RELATOR_LEN) {
        return Err(PresentationError::RelatorTooLarge(n.clone()));
    }
    let n_small: u64 = n.try_into().expect("bounded above");
    let fresh = p
        .alphabet
        .iter()
        .map(|l| l.level())
        .max()
        .expect("nonempty alphabet")
        + 1;

    let b = |i: usize| Letter::b(i as u32 + 1, fresh);
    let x = |i: usize| Letter::x(i as u32 + 1, fresh);
    let c = Letter::c(fresh);
    let y = Letter::y(fresh);

    let mut alphabet = p.alphabet.clone();
    alphabet.extend((0..m).map(b));
    alphabet.extend((0..m).map(x));
    alphabet.push(c);
    alphabet.push(y);

    let mut relators = p.relators.clone();
    // x_i c x_i⁻¹ (c b_i)⁻¹
    for i in 0..m {
        relators.push(Word::from_letters([
            (x(i), 1),
            (c, 1),
            (x(i), -1),
            (b(i), -1),
            (c, -1),
        ]));
    }
    // y b_i y⁻¹ (b_i a_i)⁻¹
    for (i, &a_i) in p.alphabet.iter().enumerate() {
        relators.push(Word::from_letters([
            (y, 1),
            (b(i), 1),
            (y, -1),
            (a_i, -1),
            (b(i), -1),
        ]));
    }
    // cⁿ
    relators.push(Word::from_letters(std::iter::repeat_n(
        (c, 1),
        n_small as usize,
    )));
    // [x_i, b_j], including the diagonal
    for i in 0..m {
        for j in 0..m {
            relators.push(commutator(x(i), b(j)));
        }
    }
    // [a_i, b_j]
    for &a_i in &p.alphabet {
        for j in 0..m {
            relators.push(commutator(a_i, b(j)));
        }
    }
    // [a_i, c]
    for &a_i in &p.alphabet {
        relators.push(commutator(a_i, c));
    }
    // [y, c], once: the schema carries no index
    relators.push(commutator(y, c));

    Presentation::new(alphabet, relators)
}

/// Left-normed commutator relator `u v u⁻¹ v⁻¹`.
fn commutator(u: Letter, v: Letter) -> Word {
    Word::from_letters([(u, 1), (v, 1), (u, -1), (v, -1)])
}

/// Number of relators one construction step adds over an `m`-letter alphabet.
pub fn construction_relator_count(m: usize) -> usize {
    2 * m * m + 3 * m + 2
}

/// The exponent schedule `N_0, N_0³, N_0⁹, …` without building presentations.
pub fn exponent_schedule(n0: &BigUint, depth: u32) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(depth as usize + 1);
    let mut n = n0.clone();
    for _ in 0..=depth {
        out.push(n.clone());
        n = (&n * &n) * &n;
    }
    out
}

/// Builds `depth + 1` tower levels starting from `p0` with odd base exponent.
/// Level `ℓ+1` applies the construction to level `ℓ` with exponent `N_ℓ`, and
/// `N_{ℓ+1} = N_ℓ³`.
pub fn build_tower(
    p0: &Presentation,
    n0: &BigUint,
    depth: u32,
) -> Result<Vec<TowerLevel>, PresentationError> {
    let two = BigUint::from(2u32);
    if n0 < &BigUint::from(3u32) || (n0 % &two).is_zero() {
        return Err(PresentationError::BadBaseExponent(n0.clone()));
    }
    if p0.alphabet.len() < 2 {
        return Err(PresentationError::AlphabetTooSmall(p0.alphabet.len()));
    }
    let mut levels = vec![TowerLevel {
        level: 0,
        presentation: p0.clone(),
        exponent: n0.clone(),
    }];
    for j in 0..depth {
        let prev = &levels[j as usize];
        let next = main_construction(&prev.presentation, &prev.exponent)?;
        let exponent = (&prev.exponent * &prev.exponent) * &prev.exponent;
        levels.push(TowerLevel {
            level: j + 1,
            presentation: next,
            exponent,
        });
    }
    Ok(levels)
}

/// Emits the presentation file format: a `level`/`exponent` header, a `gens:`
/// line, then one relator per line.
pub fn emit_presentation(level: &TowerLevel) -> String {
    level.emit()
}

pub fn parse_presentation(text: &str) -> Result<TowerLevel, PresentationError> {
    parse_tower_level(text)
}

fn parse_tower_level(text: &str) -> Result<TowerLevel, PresentationError> {
    let mut lines = text.lines().enumerate();

    let (header_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "missing header line"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let level: u32 = match parts.as_slice() {
        ["level", lvl, "exponent", _] => lvl
            .parse()
            .map_err(|_| parse_err(header_no + 1, 7, "level is not an integer"))?,
        _ => {
            return Err(parse_err(
                header_no + 1,
                1,
                "expected header `level <j> exponent <N>`",
            ))
        }
    };
    let exponent: BigUint = parts[3]
        .parse()
        .map_err(|_| parse_err(header_no + 1, header.find(parts[3]).unwrap_or(0) + 1, "exponent is not an integer"))?;

    let (gens_no, gens_line) = lines
        .next()
        .ok_or_else(|| parse_err(header_no + 2, 1, "missing `gens:` line"))?;
    let rest = gens_line
        .strip_prefix("gens:")
        .ok_or_else(|| parse_err(gens_no + 1, 1, "expected `gens:` line"))?;
    let mut alphabet = Vec::new();
    for token in rest.split_whitespace() {
        let letter = Letter::parse(token)
            .map_err(|e| parse_err(gens_no + 1, gens_line.find(token).unwrap_or(0) + 1, e.to_string()))?;
        if alphabet.contains(&letter) {
            return Err(parse_err(
                gens_no + 1,
                gens_line.find(token).unwrap_or(0) + 1,
                format!("duplicate alphabet letter `{token}`"),
            ));
        }
        alphabet.push(letter);
    }

    let mut relators = Vec::new();
    for (no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let word = Word::parse(line).map_err(|e| parse_err(no + 1, 1, e.to_string()))?;
        if word.is_empty() {
            return Err(parse_err(no + 1, 1, "relator reduces to the empty word"));
        }
        relators.push(word);
    }

    let presentation = Presentation::new(alphabet, relators).map_err(|e| match e {
        PresentationError::Parse { .. } => e,
        other => parse_err(gens_no + 1, 1, other.to_string()),
    })?;
    Ok(TowerLevel {
        level,
        presentation,
        exponent,
    })
}

/// Structural view of one construction step, recovered from a level built by
/// [`build_tower`]: the previous alphabet in `a`-role order, the fresh
/// letters, the step exponent, and the indices of the new relator schemas.
pub struct ConstructionView<'a> {
    pub level: &'a TowerLevel,
    pub base_alphabet: Vec<Letter>,
    pub b_letters: Vec<Letter>,
    pub x_letters: Vec<Letter>,
    pub c: Letter,
    pub y: Letter,
    pub step_exponent: u64,
    old_relators: usize,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ViewError {
    #[error("level 0 has no construction step to view")]
    LevelZero,
    #[error("presentation does not have the shape produced by the construction")]
    NotAConstruction,
}

impl<'a> ConstructionView<'a> {
    pub fn new(level: &'a TowerLevel) -> Result<ConstructionView<'a>, ViewError> {
        if level.level == 0 {
            return Err(ViewError::LevelZero);
        }
        let fresh = level
            .presentation
            .alphabet()
            .iter()
            .map(|l| l.level())
            .max()
            .ok_or(ViewError::NotAConstruction)?;
        let base_alphabet: Vec<Letter> = level
            .presentation
            .alphabet()
            .iter()
            .copied()
            .filter(|l| l.level() < fresh)
            .collect();
        let m = base_alphabet.len();
        let b_letters: Vec<Letter> = (1..=m as u32).map(|i| Letter::b(i, fresh)).collect();
        let x_letters: Vec<Letter> = (1..=m as u32).map(|i| Letter::x(i, fresh)).collect();
        let c = Letter::c(fresh);
        let y = Letter::y(fresh);
        for needed in b_letters.iter().chain(&x_letters).chain([&c, &y]) {
            if !level.presentation.alphabet().contains(needed) {
                return Err(ViewError::NotAConstruction);
            }
        }
        if level.presentation.alphabet().len() != 3 * m + 2 {
            return Err(ViewError::NotAConstruction);
        }
        let added = construction_relator_count(m);
        let total = level.presentation.relators().len();
        if total < added {
            return Err(ViewError::NotAConstruction);
        }
        let old_relators = total - added;
        // The step exponent is the length of the cⁿ relator.
        let step_exponent = level.presentation.relators()[old_relators + 2 * m].len() as u64;
        let view = ConstructionView {
            level,
            base_alphabet,
            b_letters,
            x_letters,
            c,
            y,
            step_exponent,
            old_relators,
        };
        for i in 0..m {
            if level.presentation.relators()[view.rel_conj_x(i)].len() != 5 {
                return Err(ViewError::NotAConstruction);
            }
        }
        Ok(view)
    }

    pub fn arity(&self) -> usize {
        self.base_alphabet.len()
    }

    /// Index of `x_i c x_i⁻¹ (c b_i)⁻¹`.
    pub fn rel_conj_x(&self, i: usize) -> usize {
        self.old_relators + i
    }

    /// Index of `y b_i y⁻¹ (b_i a_i)⁻¹`.
    pub fn rel_conj_y(&self, i: usize) -> usize {
        self.old_relators + self.arity() + i
    }

    /// Index of `cⁿ`.
    pub fn rel_c_power(&self) -> usize {
        self.old_relators + 2 * self.arity()
    }

    /// Index of `[x_i, b_j]`.
    pub fn rel_comm_xb(&self, i: usize, j: usize) -> usize {
        self.old_relators + 2 * self.arity() + 1 + i * self.arity() + j
    }

    /// Index of `[a_i, b_j]`.
    pub fn rel_comm_ab(&self, i: usize, j: usize) -> usize {
        let m = self.arity();
        self.old_relators + 2 * m + 1 + m * m + i * m + j
    }

    /// Index of `[a_i, c]`.
    pub fn rel_comm_ac(&self, i: usize) -> usize {
        let m = self.arity();
        self.old_relators + 2 * m + 1 + 2 * m * m + i
    }

    /// Index of `[y, c]`.
    pub fn rel_comm_yc(&self) -> usize {
        let m = self.arity();
        self.old_relators + 2 * m + 1 + 2 * m * m + m
    }

    /// Position of a base-alphabet letter in `a`-role order.
    pub fn base_position(&self, letter: Letter) -> Option<usize> {
        self.base_alphabet.iter().position(|&l| l == letter)
    }

    /// Letter-wise substitution of a base-alphabet word into the fresh `b`
    /// (or `x`) letters by alphabet position.
    pub fn substitute(&self, word: &Word, target: Family) -> Result<Word, ViewError> {
        let table = match target {
            Family::B => &self.b_letters,
            Family::X => &self.x_letters,
            _ => return Err(ViewError::NotAConstruction),
        };
        let mut out = Vec::with_capacity(word.len());
        for &(letter, sign) in word.letters() {
            let pos = self
                .base_position(letter)
                .ok_or(ViewError::NotAConstruction)?;
            out.push((table[pos], sign));
        }
        Ok(Word::from_letters(out))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.emit_body())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(gens: u32, n0: u64, depth: u32) -> Vec<TowerLevel> {
        build_tower(&Presentation::free(gens), &BigUint::from(n0), depth).unwrap()
    }

    #[test]
    fn construction_counts() {
        let p = Presentation::free(2);
        let g = main_construction(&p, &BigUint::from(3u32)).unwrap();
        assert_eq!(g.alphabet().len(), 8);
        assert_eq!(g.relators().len(), 16);
        assert_eq!(construction_relator_count(2), 16);
        assert_eq!(construction_relator_count(8), 154);
    }

    #[test]
    fn input_relators_embed_verbatim() {
        let a1 = Letter::a(1, 0);
        let r = Word::from_letters([(a1, 1), (a1, 1), (a1, 1)]);
        let p = Presentation::new(vec![a1, Letter::a(2, 0)], vec![r.clone()]).unwrap();
        let g = main_construction(&p, &BigUint::from(3u32)).unwrap();
        assert_eq!(g.relators()[0], r);
    }

    #[test]
    fn rejects_small_inputs() {
        assert!(main_construction(&Presentation::free(1), &BigUint::from(3u32)).is_err());
        assert!(main_construction(&Presentation::free(2), &BigUint::from(0u32)).is_err());
        assert!(build_tower(&Presentation::free(2), &BigUint::from(4u32), 1).is_err());
        assert!(build_tower(&Presentation::free(2), &BigUint::from(1u32), 1).is_err());
    }

    #[test]
    fn tower_growth() {
        let levels = tower(2, 3, 3);
        let sizes: Vec<usize> = levels
            .iter()
            .map(|l| l.presentation.alphabet().len())
            .collect();
        assert_eq!(sizes, vec![2, 8, 26, 80]);
        let exps: Vec<String> = levels.iter().map(|l| l.exponent.to_string()).collect();
        assert_eq!(exps, vec!["3", "27", "19683", "7625597484987"]);
        assert_eq!(levels.len(), 4);
        // depth 0 is the singleton tower
        assert_eq!(tower(2, 3, 0).len(), 1);
    }

    #[test]
    fn tower_is_monotone() {
        let levels = tower(2, 3, 2);
        for j in 0..levels.len() - 1 {
            let small = &levels[j].presentation;
            let big = &levels[j + 1].presentation;
            for l in small.alphabet() {
                assert!(big.alphabet().contains(l));
            }
            for r in small.relators() {
                assert!(big.relators().contains(r));
            }
        }
    }

    #[test]
    fn exponent_law_holds_deep() {
        let sched = exponent_schedule(&BigUint::from(3u32), 6);
        for j in 0..6 {
            let cube = (&sched[j] * &sched[j]) * &sched[j];
            assert_eq!(sched[j + 1], cube);
        }
        assert_eq!(sched[6], BigUint::from(3u32).pow(729u32));
    }

    #[test]
    fn emit_parse_round_trip() {
        let levels = tower(2, 3, 1);
        for level in &levels {
            let text = level.emit();
            let parsed = TowerLevel::parse(&text).unwrap();
            assert_eq!(parsed.emit(), text);
            assert_eq!(&parsed, level);
        }
    }

    #[test]
    fn parse_rejects_duplicates_and_junk() {
        assert!(TowerLevel::parse("level 0 exponent 3\ngens: a1.0 a1.0\n").is_err());
        assert!(TowerLevel::parse("nonsense\n").is_err());
        let free = TowerLevel::parse("level 0 exponent 3\ngens: a1.0 a2.0\n").unwrap();
        assert!(free.presentation.relators().is_empty());
        match TowerLevel::parse("level 0 exponent 3\ngens: a1.0 zq.0\n") {
            Err(PresentationError::Parse { line, col, .. }) => {
                assert_eq!(line, 2);
                assert!(col > 1);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn construction_view_recovers_indices() {
        let levels = tower(2, 3, 2);
        let view = ConstructionView::new(&levels[1]).unwrap();
        assert_eq!(view.arity(), 2);
        assert_eq!(view.step_exponent, 3);
        let p = &levels[1].presentation;
        assert_eq!(p.relators()[view.rel_c_power()].len(), 3);
        assert_eq!(
            p.relators()[view.rel_comm_yc()],
            Word::from_letters([
                (Letter::y(1), 1),
                (Letter::c(1), 1),
                (Letter::y(1), -1),
                (Letter::c(1), -1)
            ])
        );
        let view2 = ConstructionView::new(&levels[2]).unwrap();
        assert_eq!(view2.arity(), 8);
        assert_eq!(view2.step_exponent, 27);
        assert_eq!(view2.rel_comm_yc(), levels[2].presentation.relators().len() - 1);
    }
}
