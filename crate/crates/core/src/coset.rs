//! Todd–Coxeter coset enumeration (HLT strategy with coincidence handling).
//!
//! The engine works over an abstract generator set: relators and subgroup
//! generators are slices of nonzero signed generator numbers (`+g`/`-g`,
//! 1-based). [`todd_coxeter`] wraps it for letter presentations. Enumeration
//! that exhausts its coset budget reports an incomplete table instead of
//! failing, so callers can retry with a bigger bound.

use thiserror::Error;

use crate::presentation::Presentation;
use crate::words::Word;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TableStatus {
    Incomplete,
    Closed,
}

/// A coset table. When closed, every generator acts as a total permutation
/// of the cosets and `index` is the subgroup index. Row 0 is the subgroup
/// coset (displayed 1-based as row 1).
#[derive(Clone, Debug)]
pub struct CosetTable {
    n_gens: usize,
    status: TableStatus,
    /// Flattened `index × 2·n_gens` action table; column `2g` is the action
    /// of generator `g+1`, column `2g+1` of its inverse.
    rows: Vec<u32>,
    index: usize,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error("word uses letter `{0}` outside the presentation alphabet")]
    UnknownLetter(String),
    #[error("coset table is incomplete; raise the max-cosets bound")]
    Incomplete,
}

impl CosetTable {
    pub fn status(&self) -> TableStatus {
        self.status
    }

    pub fn is_closed(&self) -> bool {
        self.status == TableStatus::Closed
    }

    /// Number of live cosets when closed.
    pub fn index(&self) -> Option<usize> {
        match self.status {
            TableStatus::Closed => Some(self.index),
            TableStatus::Incomplete => None,
        }
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    /// Action of a signed generator on a coset (closed tables only).
    pub fn act(&self, coset: u32, letter: i32) -> u32 {
        debug_assert!(self.is_closed());
        let g = letter.unsigned_abs() as usize - 1;
        let col = if letter > 0 { 2 * g } else { 2 * g + 1 };
        self.rows[coset as usize * 2 * self.n_gens + col]
    }

    /// Applies a word of signed generators to a coset.
    pub fn act_word(&self, mut coset: u32, word: &[i32]) -> u32 {
        for &letter in word {
            coset = self.act(coset, letter);
        }
        coset
    }
}

struct Enumerator {
    n_gens: usize,
    max_cosets: usize,
    /// 1-based cosets; row 0 unused. Entry 0 means undefined.
    table: Vec<u32>,
    parent: Vec<u32>,
    n_alloc: usize,
    n_live: usize,
}

impl Enumerator {
    fn new(n_gens: usize, max_cosets: usize) -> Enumerator {
        let width = 2 * n_gens;
        Enumerator {
            n_gens,
            max_cosets,
            table: vec![0; 2 * width],
            parent: vec![0, 1],
            n_alloc: 1,
            n_live: 1,
        }
    }

    fn width(&self) -> usize {
        2 * self.n_gens
    }

    fn col(letter: i32) -> usize {
        let g = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            2 * g
        } else {
            2 * g + 1
        }
    }

    fn inv_col(col: usize) -> usize {
        col ^ 1
    }

    fn get(&self, coset: u32, col: usize) -> u32 {
        self.table[coset as usize * self.width() + col]
    }

    fn set(&mut self, coset: u32, col: usize, value: u32) {
        let w = self.width();
        self.table[coset as usize * w + col] = value;
    }

    fn rep(&mut self, mut a: u32) -> u32 {
        while self.parent[a as usize] != a {
            let p = self.parent[a as usize];
            self.parent[a as usize] = self.parent[p as usize];
            a = self.parent[a as usize];
        }
        a
    }

    fn define(&mut self, from: u32, col: usize) -> Option<u32> {
        if self.n_alloc >= self.max_cosets {
            return None;
        }
        self.n_alloc += 1;
        self.n_live += 1;
        let fresh = self.n_alloc as u32;
        let w = self.width();
        self.table.extend(std::iter::repeat_n(0, w));
        self.parent.push(fresh);
        self.set(from, col, fresh);
        self.set(fresh, Self::inv_col(col), from);
        Some(fresh)
    }

    fn coincide(&mut self, a: u32, b: u32) {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            let a = self.rep(a);
            let b = self.rep(b);
            if a == b {
                continue;
            }
            let (keep, dead) = if a < b { (a, b) } else { (b, a) };
            self.parent[dead as usize] = keep;
            self.n_live -= 1;
            for col in 0..self.width() {
                let d = self.get(dead, col);
                if d == 0 {
                    continue;
                }
                self.set(dead, col, 0);
                let ic = Self::inv_col(col);
                if self.get(d, ic) == dead {
                    self.set(d, ic, 0);
                }
                let keep_r = self.rep(keep);
                let d_r = self.rep(d);
                let existing = self.get(keep_r, col);
                if existing != 0 {
                    queue.push((existing, d_r));
                } else {
                    self.set(keep_r, col, d_r);
                    let back = self.get(d_r, ic);
                    if back != 0 {
                        queue.push((back, keep_r));
                    } else {
                        self.set(d_r, ic, keep_r);
                    }
                }
            }
        }
    }

    /// Scans `word` at `start`, defining cosets to fill any gap of length
    /// two or more. Returns false when the coset budget is exhausted.
    fn scan_and_fill(&mut self, start: u32, word: &[i32]) -> bool {
        if word.is_empty() {
            return true;
        }
        let mut i = 0usize;
        let mut j = word.len();
        let mut front = start;
        let mut back = start;
        loop {
            while i < j {
                let next = self.get(front, Self::col(word[i]));
                if next == 0 {
                    break;
                }
                front = next;
                i += 1;
            }
            if i == j {
                if front != back {
                    self.coincide(front, back);
                }
                return true;
            }
            while j > i {
                let prev = self.get(back, Self::inv_col(Self::col(word[j - 1])));
                if prev == 0 {
                    break;
                }
                back = prev;
                j -= 1;
            }
            if j == i {
                // The whole word is traversed from both ends.
                if front != back {
                    self.coincide(front, back);
                }
                return true;
            }
            if j == i + 1 {
                // Gap of one: deduction.
                let col = Self::col(word[i]);
                self.set(front, col, back);
                self.set(back, Self::inv_col(col), front);
                return true;
            }
            match self.define(front, Self::col(word[i])) {
                Some(next) => {
                    front = next;
                    i += 1;
                }
                None => return false,
            }
        }
    }

    fn run(&mut self, relators: &[Vec<i32>], subgroup: &[Vec<i32>]) -> TableStatus {
        for word in subgroup {
            if !self.scan_and_fill(1, word) {
                return TableStatus::Incomplete;
            }
        }
        let mut coset = 1u32;
        while (coset as usize) <= self.n_alloc {
            if self.rep(coset) == coset {
                for relator in relators {
                    if !self.scan_and_fill(coset, relator) {
                        return TableStatus::Incomplete;
                    }
                    if self.rep(coset) != coset {
                        break;
                    }
                }
                // Complete the row so enumeration makes progress even when
                // a generator appears in no relator.
                if self.rep(coset) == coset {
                    for col in 0..self.width() {
                        if self.get(coset, col) == 0 && self.define(coset, col).is_none() {
                            return TableStatus::Incomplete;
                        }
                    }
                }
            }
            coset += 1;
        }
        TableStatus::Closed
    }

    fn compress(mut self, status: TableStatus) -> CosetTable {
        if status == TableStatus::Incomplete {
            return CosetTable {
                n_gens: self.n_gens,
                status,
                rows: Vec::new(),
                index: 0,
            };
        }
        let mut renumber = vec![u32::MAX; self.n_alloc + 1];
        let mut live = Vec::new();
        for coset in 1..=self.n_alloc as u32 {
            if self.rep(coset) == coset {
                renumber[coset as usize] = live.len() as u32;
                live.push(coset);
            }
        }
        let width = self.width();
        let mut rows = vec![0u32; live.len() * width];
        for (new, &old) in live.iter().enumerate() {
            for col in 0..width {
                let target = self.get(old, col);
                debug_assert_ne!(target, 0, "closed table has no undefined entries");
                let target = self.rep(target);
                rows[new * width + col] = renumber[target as usize];
            }
        }
        CosetTable {
            n_gens: self.n_gens,
            status,
            index: live.len(),
            rows,
        }
    }
}

/// Enumerates cosets of `⟨subgroup⟩` in the group presented over `n_gens`
/// abstract generators by `relators`, stopping at `max_cosets` live cosets.
pub fn enumerate(
    n_gens: usize,
    relators: &[Vec<i32>],
    subgroup: &[Vec<i32>],
    max_cosets: usize,
) -> CosetTable {
    let mut e = Enumerator::new(n_gens, max_cosets);
    let status = e.run(relators, subgroup);
    e.compress(status)
}

/// Translates a letter word into signed generator numbers over `p`'s alphabet.
pub fn word_to_indices(p: &Presentation, word: &Word) -> Result<Vec<i32>, CosetError> {
    word.letters()
        .iter()
        .map(|&(letter, sign)| {
            let pos = p
                .letter_position(letter)
                .ok_or_else(|| CosetError::UnknownLetter(letter.token()))?;
            Ok((pos as i32 + 1) * sign as i32)
        })
        .collect()
}

/// Coset enumeration over a letter presentation.
pub fn todd_coxeter(
    p: &Presentation,
    subgroup_gens: &[Word],
    max_cosets: usize,
) -> Result<CosetTable, CosetError> {
    let relators: Vec<Vec<i32>> = p
        .relators()
        .iter()
        .map(|r| word_to_indices(p, r))
        .collect::<Result<_, _>>()?;
    let subgroup: Vec<Vec<i32>> = subgroup_gens
        .iter()
        .map(|w| word_to_indices(p, w))
        .collect::<Result<_, _>>()?;
    Ok(enumerate(p.alphabet().len(), &relators, &subgroup, max_cosets))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed_index(n_gens: usize, relators: &[Vec<i32>], subgroup: &[Vec<i32>]) -> usize {
        let table = enumerate(n_gens, relators, subgroup, 100_000);
        assert!(table.is_closed());
        table.index().unwrap()
    }

    #[test]
    fn cyclic_three() {
        assert_eq!(closed_index(1, &[vec![1, 1, 1]], &[]), 3);
    }

    #[test]
    fn klein_four() {
        let relators = vec![vec![1, 1], vec![2, 2], vec![1, 2, 1, 2]];
        assert_eq!(closed_index(2, &relators, &[]), 4);
    }

    #[test]
    fn symmetric_three() {
        let relators = vec![vec![1, 1], vec![2, 2], vec![1, 2, 1, 2, 1, 2]];
        assert_eq!(closed_index(2, &relators, &[]), 6);
        // Index of ⟨a⟩ is 3.
        assert_eq!(closed_index(2, &relators, &[vec![1]]), 3);
    }

    #[test]
    fn quaternion_eight() {
        // ⟨a, b ‖ a⁴, a²b⁻², b⁻¹aba⟩
        let relators = vec![
            vec![1, 1, 1, 1],
            vec![1, 1, -2, -2],
            vec![-2, 1, 2, 1],
        ];
        assert_eq!(closed_index(2, &relators, &[]), 8);
    }

    #[test]
    fn free_group_does_not_close() {
        let table = enumerate(2, &[], &[], 500);
        assert!(!table.is_closed());
        assert_eq!(table.index(), None);
    }

    #[test]
    fn euclidean_triangle_group_exhausts_the_budget() {
        // ⟨a, b ‖ a³, b³, (ab)³⟩ is infinite; enumeration must report an
        // incomplete table rather than diverge.
        let relators = vec![vec![1, 1, 1], vec![2, 2, 2], vec![1, 2, 1, 2, 1, 2]];
        let table = enumerate(2, &relators, &[], 2000);
        assert!(!table.is_closed());
    }

    #[test]
    fn symmetric_four() {
        // ⟨a, b ‖ a², b³, (ab)⁴⟩
        let relators = vec![
            vec![1, 1],
            vec![2, 2, 2],
            vec![1, 2, 1, 2, 1, 2, 1, 2],
        ];
        assert_eq!(closed_index(2, &relators, &[]), 24);
        // Index of ⟨b⟩ is 8, of ⟨ab⟩ is 6.
        assert_eq!(closed_index(2, &relators, &[vec![2]]), 8);
        assert_eq!(closed_index(2, &relators, &[vec![1, 2]]), 6);
    }

    #[test]
    fn closed_actions_are_permutations() {
        let relators = vec![vec![1, 1], vec![2, 2], vec![1, 2, 1, 2, 1, 2]];
        let table = enumerate(2, &relators, &[], 1000);
        let n = table.index().unwrap() as u32;
        for letter in [1i32, -1, 2, -2] {
            let mut seen = vec![false; n as usize];
            for coset in 0..n {
                let image = table.act(coset, letter);
                assert!(!seen[image as usize]);
                seen[image as usize] = true;
            }
        }
        for coset in 0..n {
            for letter in [1i32, 2] {
                assert_eq!(table.act(table.act(coset, letter), -letter), coset);
            }
        }
    }
}
