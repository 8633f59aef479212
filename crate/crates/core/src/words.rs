//! Free-group words over stratified alphabets.
//!
//! Letters belong to one of five families (`a`, `b`, `x`, `c`, `y`) and carry
//! the tower level at which they were introduced, so nested constructions can
//! keep extending the alphabet without name collisions. Words are immutable
//! sequences of signed letters; every operation that produces a word returns
//! it freely reduced.

use std::fmt;

use thiserror::Error;

/// Letter family. `C` and `Y` letters carry no generator index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Family {
    A,
    B,
    X,
    C,
    Y,
}

impl Family {
    pub fn symbol(self) -> char {
        match self {
            Family::A => 'a',
            Family::B => 'b',
            Family::X => 'x',
            Family::C => 'c',
            Family::Y => 'y',
        }
    }

    fn from_symbol(ch: char) -> Option<Family> {
        match ch {
            'a' => Some(Family::A),
            'b' => Some(Family::B),
            'x' => Some(Family::X),
            'c' => Some(Family::C),
            'y' => Some(Family::Y),
            _ => None,
        }
    }

    pub fn is_indexed(self) -> bool {
        matches!(self, Family::A | Family::B | Family::X)
    }
}

/// A single generator. Two letters are equal iff family, index and level all
/// agree; ordering is by level, then family, then index, which is the order
/// fresh letters are appended to tower alphabets.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    level: u32,
    family: Family,
    index: Option<u32>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("family {0:?} requires a generator index")]
    MissingIndex(Family),
    #[error("family {0:?} does not take a generator index")]
    UnexpectedIndex(Family),
    #[error("cannot parse letter token `{0}`")]
    BadLetterToken(String),
    #[error("substitution source must be family-a letters of one level; found {0}")]
    NotSubstitutable(Letter),
    #[error("substitution target must be family b or x, not {0:?}")]
    BadSubstitutionTarget(Family),
}

impl Letter {
    /// An indexed letter (families `a`, `b`, `x`). Indices are 1-based.
    pub fn indexed(family: Family, index: u32, level: u32) -> Result<Letter, WordError> {
        if !family.is_indexed() {
            return Err(WordError::UnexpectedIndex(family));
        }
        Ok(Letter {
            level,
            family,
            index: Some(index),
        })
    }

    /// An index-free letter (families `c`, `y`).
    pub fn plain(family: Family, level: u32) -> Result<Letter, WordError> {
        if family.is_indexed() {
            return Err(WordError::MissingIndex(family));
        }
        Ok(Letter {
            level,
            family,
            index: None,
        })
    }

    pub fn a(index: u32, level: u32) -> Letter {
        Letter::indexed(Family::A, index, level).unwrap()
    }

    pub fn b(index: u32, level: u32) -> Letter {
        Letter::indexed(Family::B, index, level).unwrap()
    }

    pub fn x(index: u32, level: u32) -> Letter {
        Letter::indexed(Family::X, index, level).unwrap()
    }

    pub fn c(level: u32) -> Letter {
        Letter::plain(Family::C, level).unwrap()
    }

    pub fn y(level: u32) -> Letter {
        Letter::plain(Family::Y, level).unwrap()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn index(&self) -> Option<u32> {
        self.index
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Text form: `a1.0`, `b3.1`, `c.1`; the dot separates index from level.
    pub fn token(&self) -> String {
        match self.index {
            Some(i) => format!("{}{}.{}", self.family.symbol(), i, self.level),
            None => format!("{}.{}", self.family.symbol(), self.level),
        }
    }

    pub fn parse(token: &str) -> Result<Letter, WordError> {
        let bad = || WordError::BadLetterToken(token.to_string());
        let mut chars = token.chars();
        let family = chars.next().and_then(Family::from_symbol).ok_or_else(bad)?;
        let rest: &str = &token[1..];
        let (index_part, level_part) = rest.split_once('.').ok_or_else(bad)?;
        let level: u32 = level_part.parse().map_err(|_| bad())?;
        if family.is_indexed() {
            let index: u32 = index_part.parse().map_err(|_| bad())?;
            if index == 0 {
                return Err(bad());
            }
            Letter::indexed(family, index, level)
        } else {
            if !index_part.is_empty() {
                return Err(bad());
            }
            Letter::plain(family, level)
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

/// Sign of a letter occurrence, `+1` or `-1`.
pub type Sign = i8;

/// A freely reduced word: the unit of all group computations here.
///
/// Construction reduces eagerly, so `Word` values are canonical and can be
/// compared for free-group equality with `==`. The raw (possibly unreduced)
/// spelling is represented by a plain `&[(Letter, Sign)]` slice where needed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<(Letter, Sign)>,
}

impl Word {
    pub fn empty() -> Word {
        Word {
            letters: Vec::new(),
        }
    }

    /// Builds a word from signed letters, freely reducing.
    pub fn from_letters(letters: impl IntoIterator<Item = (Letter, Sign)>) -> Word {
        let mut stack: Vec<(Letter, Sign)> = Vec::new();
        for (letter, sign) in letters {
            debug_assert!(sign == 1 || sign == -1);
            match stack.last() {
                Some(&(top, top_sign)) if top == letter && top_sign == -sign => {
                    stack.pop();
                }
                _ => stack.push((letter, sign)),
            }
        }
        Word { letters: stack }
    }

    pub fn single(letter: Letter) -> Word {
        Word {
            letters: vec![(letter, 1)],
        }
    }

    pub fn generator(letter: Letter, sign: Sign) -> Word {
        Word {
            letters: vec![(letter, sign)],
        }
    }

    pub fn letters(&self) -> &[(Letter, Sign)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The stack reduction is idempotent, so a constructed `Word` is always
    /// reduced; this re-checks the invariant.
    pub fn is_reduced(&self) -> bool {
        self.letters
            .windows(2)
            .all(|w| !(w[0].0 == w[1].0 && w[0].1 == -w[1].1))
    }

    pub fn multiply(&self, other: &Word) -> Word {
        Word::from_letters(
            self.letters
                .iter()
                .copied()
                .chain(other.letters.iter().copied()),
        )
    }

    pub fn invert(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(l, s)| (l, -s))
                .collect(),
        }
    }

    /// `t u t⁻¹`, reduced.
    pub fn conjugate(&self, t: &Word) -> Word {
        t.multiply(self).multiply(&t.invert())
    }

    pub fn pow(&self, n: u64) -> Word {
        let mut out = Word::empty();
        for _ in 0..n {
            out = out.multiply(self);
        }
        out
    }

    /// Splits off the maximal `u` with `self = u · core · u⁻¹` and `core`
    /// cyclically reduced. A reduced nonempty word has a nonempty core.
    pub fn cyclic_decompose(&self) -> (Word, Word) {
        let mut lo = 0usize;
        let mut hi = self.letters.len();
        while hi - lo >= 2 {
            let (first, last) = (self.letters[lo], self.letters[hi - 1]);
            if first.0 == last.0 && first.1 == -last.1 {
                lo += 1;
                hi -= 1;
            } else {
                break;
            }
        }
        let u = Word {
            letters: self.letters[..lo].to_vec(),
        };
        let core = Word {
            letters: self.letters[lo..hi].to_vec(),
        };
        (u, core)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word {
            letters: self.letters[range].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.len() >= self.letters.len()
            && other.letters[..self.letters.len()] == self.letters[..]
    }

    /// Whitespace-separated letter tokens; inverses carry a `^-1` suffix.
    pub fn emit(&self) -> String {
        self.letters
            .iter()
            .map(|(l, s)| {
                if *s == 1 {
                    l.token()
                } else {
                    format!("{}^-1", l.token())
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse(text: &str) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (body, sign) = match token.strip_suffix("^-1") {
                Some(body) => (body, -1),
                None => (token, 1),
            };
            letters.push((Letter::parse(body)?, sign));
        }
        Ok(Word::from_letters(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", self.emit())
        }
    }
}

/// Returns the unique freely reduced form of a raw letter sequence.
pub fn free_reduce(letters: &[(Letter, Sign)]) -> Word {
    Word::from_letters(letters.iter().copied())
}

/// Letter-wise substitution `a_i ↦ b_i` (or `a_i ↦ x_i`) sending a family-`a`
/// word at level `j` to a word in the fresh letters of level `j + 1`, signs
/// and order preserved.
pub fn substitute_family(word: &Word, target: Family) -> Result<Word, WordError> {
    if !matches!(target, Family::B | Family::X) {
        return Err(WordError::BadSubstitutionTarget(target));
    }
    let level = match word.letters().first() {
        Some((l, _)) => l.level(),
        None => return Ok(Word::empty()),
    };
    let mut out = Vec::with_capacity(word.len());
    for &(letter, sign) in word.letters() {
        if letter.family() != Family::A || letter.level() != level {
            return Err(WordError::NotSubstitutable(letter));
        }
        let index = letter.index().expect("family-a letters are indexed");
        out.push((Letter::indexed(target, index, level + 1)?, sign));
    }
    Ok(Word::from_letters(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    #[test]
    fn reduce_cancels_adjacent_inverses() {
        assert_eq!(w("a1.0 a1.0^-1 b2.1"), w("b2.1"));
        assert_eq!(w(""), Word::empty());
        assert_eq!(w("a1.0 a2.0 a2.0^-1 a1.0"), w("a1.0 a1.0"));
    }

    #[test]
    fn reduce_is_idempotent_on_short_words() {
        // Exhaustive over the 2-letter signed alphabet up to length 8.
        let symbols = [
            (Letter::a(1, 0), 1),
            (Letter::a(1, 0), -1),
            (Letter::a(2, 0), 1),
            (Letter::a(2, 0), -1),
        ];
        let mut stack = vec![Vec::new()];
        for _ in 0..8 {
            let mut next = Vec::new();
            for word in &stack {
                for s in symbols {
                    let mut longer = word.clone();
                    longer.push(s);
                    next.push(longer);
                }
            }
            for raw in &next {
                let once = free_reduce(raw);
                let twice = free_reduce(once.letters());
                assert_eq!(once, twice);
                assert!(once.is_reduced());
            }
            stack = next;
        }
    }

    #[test]
    fn group_laws() {
        assert_eq!(w("a1.0").multiply(&w("a1.0^-1")), Word::empty());
        assert_eq!(w("a1.0 b2.1^-1").invert(), w("b2.1 a1.0^-1"));
        let conj = w("c.1").conjugate(&w("y.1"));
        assert_eq!(conj, w("y.1 c.1 y.1^-1"));
        assert_eq!(conj.len(), 3);
    }

    #[test]
    fn multiply_bounds_length() {
        let u = w("a1.0 a2.0 a1.0^-1");
        let v = w("a1.0 a2.0^-1");
        assert!(u.multiply(&v).len() <= u.len() + v.len());
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(
            substitute_family(&w("a1.0 a2.0^-1"), Family::B).unwrap(),
            w("b1.1 b2.1^-1")
        );
        assert_eq!(
            substitute_family(&Word::empty(), Family::X).unwrap(),
            Word::empty()
        );
        assert_eq!(
            substitute_family(&w("a2.0 a2.0"), Family::X).unwrap(),
            w("x2.1 x2.1")
        );
        assert!(substitute_family(&w("b1.1"), Family::B).is_err());
        assert!(substitute_family(&w("a1.0"), Family::Y).is_err());
    }

    #[test]
    fn cyclic_decomposition() {
        let word = w("a1.0 a2.0 a1.0 a2.0^-1 a1.0^-1");
        let (u, core) = word.cyclic_decompose();
        assert_eq!(u, w("a1.0 a2.0"));
        assert_eq!(core, w("a1.0"));
        assert_eq!(core.conjugate(&u), word);
        let cyclically_reduced = w("a1.0 a2.0");
        let (u2, core2) = cyclically_reduced.cyclic_decompose();
        assert!(u2.is_empty());
        assert_eq!(core2, cyclically_reduced);
    }

    #[test]
    fn letter_token_round_trip() {
        for token in ["a1.0", "b3.1", "x2.1", "c.1", "y.4"] {
            assert_eq!(Letter::parse(token).unwrap().token(), token);
        }
        assert!(Letter::parse("a.0").is_err());
        assert!(Letter::parse("c1.0").is_err());
        assert!(Letter::parse("q1.0").is_err());
        assert!(Letter::parse("a0.0").is_err());
    }
}
