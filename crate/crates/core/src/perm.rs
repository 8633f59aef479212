//! Permutations on `0..n` and closure of small permutation groups.

use std::collections::HashMap;

/// A permutation stored as its image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Option<Perm> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    /// `self` then `other` (left-to-right composition).
    pub fn then(&self, other: &Perm) -> Perm {
        Perm {
            images: self.images.iter().map(|&p| other.images[p as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (from, &to) in self.images.iter().enumerate() {
            images[to as usize] = from as u32;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    pub fn order(&self) -> u64 {
        let mut power = self.clone();
        let mut n = 1u64;
        while !power.is_identity() {
            power = power.then(self);
            n += 1;
        }
        n
    }
}

/// A small permutation group with its elements fully enumerated in BFS order
/// from the identity, so element index 0 is the identity and indices are
/// stable for a fixed generator list.
#[derive(Clone, Debug)]
pub struct PermGroup {
    gen_names: Vec<String>,
    gens: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, u32>,
    /// Defining word per element, as signed 1-based generator numbers.
    words: Vec<Vec<i32>>,
}

impl PermGroup {
    /// Closes the generator set; `budget` bounds the element count.
    pub fn close(gen_names: Vec<String>, gens: Vec<Perm>, budget: usize) -> Option<PermGroup> {
        assert_eq!(gen_names.len(), gens.len());
        let degree = gens.first().map_or(0, Perm::degree);
        let identity = Perm::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0u32);
        let mut words: Vec<Vec<i32>> = vec![Vec::new()];
        let mut frontier = 0usize;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            for (g, gen) in gens.iter().enumerate() {
                for (perm, letter) in [
                    (current.then(gen), g as i32 + 1),
                    (current.then(&gen.inverse()), -(g as i32 + 1)),
                ] {
                    if !index.contains_key(&perm) {
                        if elements.len() >= budget {
                            return None;
                        }
                        let mut word = words[frontier].clone();
                        word.push(letter);
                        index.insert(perm.clone(), elements.len() as u32);
                        elements.push(perm);
                        words.push(word);
                    }
                }
            }
            frontier += 1;
        }
        Some(PermGroup {
            gen_names,
            gens,
            elements,
            index,
            words,
        })
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn element_index(&self, perm: &Perm) -> Option<u32> {
        self.index.get(perm).copied()
    }

    pub fn word_for(&self, element: u32) -> &[i32] {
        &self.words[element as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let perm = self.elements[a as usize].then(&self.elements[b as usize]);
        self.index[&perm]
    }

    pub fn inv(&self, a: u32) -> u32 {
        let perm = self.elements[a as usize].inverse();
        self.index[&perm]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_invert() {
        let p = Perm::from_images(vec![1, 2, 0]).unwrap();
        assert_eq!(p.order(), 3);
        assert!(p.then(&p.inverse()).is_identity());
        let q = Perm::from_images(vec![1, 0, 2]).unwrap();
        assert_eq!(p.then(&q).apply(0), q.apply(p.apply(0)));
    }

    #[test]
    fn closes_symmetric_three() {
        let r = Perm::from_images(vec![1, 2, 0]).unwrap();
        let s = Perm::from_images(vec![1, 0, 2]).unwrap();
        let g = PermGroup::close(vec!["r".into(), "s".into()], vec![r, s], 100).unwrap();
        assert_eq!(g.order(), 6);
        for e in 0..g.order() as u32 {
            // Defining words replay to their element.
            let mut perm = Perm::identity(3);
            for &letter in g.word_for(e) {
                let gen = &g.gens()[letter.unsigned_abs() as usize - 1];
                perm = if letter > 0 {
                    perm.then(gen)
                } else {
                    perm.then(&gen.inverse())
                };
            }
            assert_eq!(g.element_index(&perm), Some(e));
        }
    }

    #[test]
    fn budget_is_respected() {
        let r = Perm::from_images(vec![1, 2, 0]).unwrap();
        assert!(PermGroup::close(vec!["r".into()], vec![r], 2).is_none());
    }
}
