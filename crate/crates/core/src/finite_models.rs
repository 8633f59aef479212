//! Concrete finite realizations of the auxiliary groups at small exponent.
//!
//! Free Burnside groups of exponent 2 and 3 are finite, so the groups the
//! construction manipulates (`K = H/Hⁿ`, `B(ℬ∪c, n)`, `B(𝒳, n)`, the direct
//! product `P`, and the semidirect product `Q`) can all be realized exactly
//! at desk scale. Orders come from coset enumeration (the regular
//! representation doubles as the element set), and the twisting and embedding
//! maps are verified generator-image homomorphisms.

use std::collections::HashMap;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coset;
use crate::perm::{Perm, PermGroup};
use crate::presentation::Presentation;
use crate::words::Word;

pub use crate::coset::{todd_coxeter, CosetTable, TableStatus};


pub type PGroup = DirectProduct<CosetGroup, CosetGroup>;
pub type QGroup = Semidirect<PGroup>;

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;
pub const DEFAULT_ELEMENT_BUDGET: usize = 10_000_000;
/// Cube relators of all reduced words up to this length pin B(m,3).
pub const CUBE_WORD_BOUND: usize = 4;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("coset enumeration did not close within {0} cosets")]
    EnumerationIncomplete(usize),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("element of order not dividing {expected} found; the model is not of exponent {expected}")]
    ExponentFailed { expected: u64 },
    #[error("generator images violate relator {relator} of the domain")]
    RelatorViolated { relator: usize },
    #[error("map is not bijective on the element set")]
    NotBijective,
    #[error("map is not injective: image order {image} < domain order {domain}")]
    NotInjective { image: u64, domain: u64 },
    #[error("closure exceeded the element budget of {0}")]
    BudgetExceeded(usize),
    #[error("word uses a generator the model does not have: `{0}`")]
    UnknownGenerator(String),
    #[error(transparent)]
    Coset(#[from] coset::CosetError),
}

/// A finite group with named generators and decidable arithmetic.
///
/// `decompose` returns a defining word (signed 1-based generator numbers)
/// for an element; maps between models are transported along these words.
pub trait FiniteGroup {
    type Elem: Clone + Eq + Ord + Hash + std::fmt::Debug;

    fn order(&self) -> u64;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn n_gens(&self) -> usize;
    fn gen_name(&self, i: usize) -> &str;
    fn gen(&self, i: usize) -> Self::Elem;
    fn decompose(&self, e: &Self::Elem) -> Vec<i32>;
    fn defining_relators(&self) -> Vec<Vec<i32>>;
    fn elements(&self) -> Vec<Self::Elem>;

    fn gen_by_name(&self, name: &str) -> Option<Self::Elem> {
        (0..self.n_gens())
            .find(|&i| self.gen_name(i) == name)
            .map(|i| self.gen(i))
    }

    fn eval_word(&self, word: &[i32]) -> Self::Elem {
        let mut acc = self.identity();
        for &letter in word {
            let g = self.gen(letter.unsigned_abs() as usize - 1);
            let g = if letter > 0 { g } else { self.inv(&g) };
            acc = self.mul(&acc, &g);
        }
        acc
    }

    fn pow(&self, e: &Self::Elem, n: u64) -> Self::Elem {
        let mut acc = self.identity();
        for _ in 0..n {
            acc = self.mul(&acc, e);
        }
        acc
    }
}

/// Searches generator products of length at most `max_len` (in generator
/// order) for an element of exactly the given order.
pub fn find_element_of_order<G: FiniteGroup>(
    group: &G,
    target: u64,
    max_len: usize,
) -> Option<(Vec<usize>, G::Elem)> {
    let mut layer: Vec<(Vec<usize>, G::Elem)> = vec![(Vec::new(), group.identity())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (word, elem) in &layer {
            for g in 0..group.n_gens() {
                let mut w = word.clone();
                w.push(g);
                let e = group.mul(elem, &group.gen(g));
                if element_order(group, &e) == target {
                    return Some((w, e));
                }
                next.push((w, e));
            }
        }
        layer = next;
    }
    None
}

/// Order of a single element by iteration.
pub fn element_order<G: FiniteGroup>(group: &G, e: &G::Elem) -> u64 {
    let id = group.identity();
    let mut acc = e.clone();
    let mut n = 1u64;
    while acc != id {
        acc = group.mul(&acc, e);
        n += 1;
    }
    n
}

/// Closure of a generating set inside a model, within a budget.
pub fn closure<G: FiniteGroup>(
    group: &G,
    gens: &[G::Elem],
    budget: usize,
) -> Result<Vec<G::Elem>, ModelError> {
    let mut elements = vec![group.identity()];
    let mut seen: HashMap<G::Elem, u32> = HashMap::new();
    seen.insert(group.identity(), 0);
    let mut frontier = 0usize;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        for g in gens {
            for next in [group.mul(&current, g), group.mul(&current, &group.inv(g))] {
                if !seen.contains_key(&next) {
                    if elements.len() >= budget {
                        return Err(ModelError::BudgetExceeded(budget));
                    }
                    seen.insert(next.clone(), elements.len() as u32);
                    elements.push(next);
                }
            }
        }
        frontier += 1;
    }
    Ok(elements)
}

pub fn subgroup_order<G: FiniteGroup>(
    group: &G,
    gens: &[G::Elem],
    budget: usize,
) -> Result<u64, ModelError> {
    Ok(closure(group, gens, budget)?.len() as u64)
}

/// Default length bound for generator-product sweeps in exponent checks.
pub const DEFAULT_WORD_BOUND: usize = 8;

/// Checks `gᵉ = 1` on all products of generators up to length 4 and on
/// seeded random generator words of length `word_bound`; returns the first
/// violating element, if any.
pub fn exponent_check_bounded<G: FiniteGroup>(
    group: &G,
    e: u64,
    seed: u64,
    samples: usize,
    word_bound: usize,
) -> Option<G::Elem> {
    let id = group.identity();
    let gens: Vec<G::Elem> = (0..group.n_gens()).map(|i| group.gen(i)).collect();
    let mut signed: Vec<G::Elem> = gens.clone();
    signed.extend(gens.iter().map(|g| group.inv(g)));
    let mut layer = vec![id.clone()];
    for _ in 0..4 {
        let mut next = Vec::new();
        for base in &layer {
            for g in &signed {
                let prod = group.mul(base, g);
                if group.pow(&prod, e) != id {
                    return Some(prod);
                }
                next.push(prod);
            }
        }
        layer = next;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut elem = id.clone();
        for _ in 0..word_bound.max(1) * 2 {
            let pick = rng.gen_range(0..signed.len());
            elem = group.mul(&elem, &signed[pick]);
        }
        if group.pow(&elem, e) != id {
            return Some(elem);
        }
    }
    None
}

pub fn exponent_check<G: FiniteGroup>(group: &G, e: u64, seed: u64, samples: usize) -> Option<G::Elem> {
    exponent_check_bounded(group, e, seed, samples, DEFAULT_WORD_BOUND)
}

// ---------------------------------------------------------------------------
// Regular-representation groups from closed coset tables
// ---------------------------------------------------------------------------

/// A finite group realized through its regular action: elements are the
/// cosets of the trivial subgroup, and multiplication replays defining words
/// through the table.
#[derive(Clone, Debug)]
pub struct CosetGroup {
    gen_names: Vec<String>,
    table: CosetTable,
    /// BFS word from the identity coset to each coset.
    words: Vec<Vec<i32>>,
    relators: Vec<Vec<i32>>,
}

impl CosetGroup {
    /// Wraps a closed table over the trivial subgroup.
    pub fn from_table(
        gen_names: Vec<String>,
        table: CosetTable,
        relators: Vec<Vec<i32>>,
    ) -> Result<CosetGroup, ModelError> {
        let n = table
            .index()
            .ok_or(ModelError::EnumerationIncomplete(0))?;
        // BFS words through the action give each element a short spelling.
        let mut words: Vec<Option<Vec<i32>>> = vec![None; n];
        words[0] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([0u32]);
        let signed: Vec<i32> = (1..=gen_names.len() as i32)
            .flat_map(|g| [g, -g])
            .collect();
        while let Some(coset) = queue.pop_front() {
            for &letter in &signed {
                let next = table.act(coset, letter);
                if words[next as usize].is_none() {
                    let mut w = words[coset as usize].clone().unwrap();
                    w.push(letter);
                    words[next as usize] = Some(w);
                    queue.push_back(next);
                }
            }
        }
        let words: Vec<Vec<i32>> = words
            .into_iter()
            .map(|w| w.expect("closed table is transitive on cosets"))
            .collect();
        Ok(CosetGroup {
            gen_names,
            table,
            words,
            relators,
        })
    }

    /// Presents and enumerates: the group on `gen_names` with `relators`.
    pub fn enumerate(
        gen_names: Vec<String>,
        relators: Vec<Vec<i32>>,
        max_cosets: usize,
    ) -> Result<CosetGroup, ModelError> {
        let table = coset::enumerate(gen_names.len(), &relators, &[], max_cosets);
        if !table.is_closed() {
            return Err(ModelError::EnumerationIncomplete(max_cosets));
        }
        CosetGroup::from_table(gen_names, table, relators)
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    /// Verifies every element has order dividing `n`.
    pub fn verify_exponent(&self, n: u64) -> Result<(), ModelError> {
        for e in 0..self.order() as u32 {
            if self.pow(&e, n) != 0 {
                return Err(ModelError::ExponentFailed { expected: n });
            }
        }
        Ok(())
    }
}

impl FiniteGroup for CosetGroup {
    type Elem = u32;

    fn order(&self) -> u64 {
        self.words.len() as u64
    }

    fn identity(&self) -> u32 {
        0
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.table.act_word(*a, &self.words[*b as usize])
    }

    fn inv(&self, a: &u32) -> u32 {
        let mut coset = 0u32;
        for &letter in self.words[*a as usize].iter().rev() {
            coset = self.table.act(coset, -letter);
        }
        coset
    }

    fn n_gens(&self) -> usize {
        self.gen_names.len()
    }

    fn gen_name(&self, i: usize) -> &str {
        &self.gen_names[i]
    }

    fn gen(&self, i: usize) -> u32 {
        self.table.act(0, i as i32 + 1)
    }

    fn decompose(&self, e: &u32) -> Vec<i32> {
        self.words[*e as usize].clone()
    }

    fn defining_relators(&self) -> Vec<Vec<i32>> {
        self.relators.clone()
    }

    fn elements(&self) -> Vec<u32> {
        (0..self.order() as u32).collect()
    }
}

// ---------------------------------------------------------------------------
// Burnside groups
// ---------------------------------------------------------------------------

/// All freely reduced nonempty words of length ≤ `max_len` over `n_gens`
/// signed generators.
pub fn reduced_words(n_gens: usize, max_len: usize) -> Vec<Vec<i32>> {
    let signed: Vec<i32> = (1..=n_gens as i32).flat_map(|g| [g, -g]).collect();
    let mut out: Vec<Vec<i32>> = Vec::new();
    let mut layer: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for word in &layer {
            for &s in &signed {
                if word.last() == Some(&-s) {
                    continue;
                }
                let mut w = word.clone();
                w.push(s);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Canonical representative of a word up to cyclic rotation and inversion;
/// used to deduplicate power relators with the same normal closure.
fn cyclic_canonical(word: &[i32]) -> Vec<i32> {
    let mut best: Option<Vec<i32>> = None;
    let inverse: Vec<i32> = word.iter().rev().map(|&l| -l).collect();
    for w in [word.to_vec(), inverse] {
        for r in 0..w.len() {
            let mut rot = w[r..].to_vec();
            rot.extend_from_slice(&w[..r]);
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// `n`-th powers of all reduced words up to `max_len`, deduplicated up to
/// conjugacy-preserving symmetries.
pub fn power_relators(n_gens: usize, exponent: u64, max_len: usize) -> Vec<Vec<i32>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for word in reduced_words(n_gens, max_len) {
        // Only cyclically reduced words contribute new normal closure.
        if word.len() >= 2 && word[0] == -word[word.len() - 1] {
            continue;
        }
        if !seen.insert(cyclic_canonical(&word)) {
            continue;
        }
        let mut power = Vec::with_capacity(word.len() * exponent as usize);
        for _ in 0..exponent {
            power.extend_from_slice(&word);
        }
        out.push(power);
    }
    out
}

/// The free Burnside group `B(m, n)` for `n ∈ {2, 3}`, `m ≤ 4`, with
/// generator names supplied by the caller. Construction enumerates cosets
/// against power relators of bounded length and then verifies the exponent
/// on every element, which together pin the group exactly.
pub fn burnside_group_named(
    gen_names: Vec<String>,
    n: u64,
    max_cosets: usize,
) -> Result<CosetGroup, ModelError> {
    let m = gen_names.len();
    if !(n == 2 || n == 3) {
        return Err(ModelError::Unsupported(format!(
            "burnside exponent must be 2 or 3, got {n}"
        )));
    }
    if !(1..=4).contains(&m) {
        return Err(ModelError::Unsupported(format!(
            "burnside rank must be between 1 and 4, got {m}"
        )));
    }
    let word_bound = if n == 2 { 2 } else { CUBE_WORD_BOUND };
    let relators = power_relators(m, n, word_bound);
    let group = CosetGroup::enumerate(gen_names, relators, max_cosets)?;
    group.verify_exponent(n)?;
    Ok(group)
}

pub fn burnside_group(m: usize, n: u64) -> Result<CosetGroup, ModelError> {
    let names = (1..=m).map(|i| format!("g{i}")).collect();
    burnside_group_named(names, n, DEFAULT_MAX_COSETS)
}

/// `H/Hⁿ` for a letter presentation of `H`: the presentation's relators plus
/// bounded power relators, with a full exponent verification pass.
pub fn quotient_by_powers(
    p: &Presentation,
    n: u64,
    max_cosets: usize,
) -> Result<CosetGroup, ModelError> {
    if !(n == 2 || n == 3) {
        return Err(ModelError::Unsupported(format!(
            "power quotient exponent must be 2 or 3, got {n}"
        )));
    }
    let m = p.alphabet().len();
    let word_bound = if n == 2 { 2 } else { CUBE_WORD_BOUND };
    let mut relators: Vec<Vec<i32>> = p
        .relators()
        .iter()
        .map(|r| coset::word_to_indices(p, r))
        .collect::<Result<_, _>>()?;
    relators.extend(power_relators(m, n, word_bound));
    let names = p.alphabet().iter().map(|l| l.token()).collect();
    let group = CosetGroup::enumerate(names, relators, max_cosets)?;
    group.verify_exponent(n)?;
    Ok(group)
}

/// Evaluates a letter word in a model through a letter-position map.
pub fn eval_letter_word<G: FiniteGroup>(
    group: &G,
    position: impl Fn(crate::words::Letter) -> Option<usize>,
    word: &Word,
) -> Result<G::Elem, ModelError> {
    let mut acc = group.identity();
    for &(letter, sign) in word.letters() {
        let i = position(letter).ok_or_else(|| ModelError::UnknownGenerator(letter.token()))?;
        let g = group.gen(i);
        let g = if sign > 0 { g } else { group.inv(&g) };
        acc = group.mul(&acc, &g);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Direct products
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct DirectProduct<L: FiniteGroup, R: FiniteGroup> {
    pub left: L,
    pub right: R,
}

/// `g1 × g2` with componentwise multiplication.
pub fn direct_product<L: FiniteGroup, R: FiniteGroup>(g1: L, g2: R) -> DirectProduct<L, R> {
    DirectProduct::new(g1, g2)
}

impl<L: FiniteGroup, R: FiniteGroup> DirectProduct<L, R> {
    pub fn new(left: L, right: R) -> DirectProduct<L, R> {
        DirectProduct { left, right }
    }

    pub fn from_left(&self, l: L::Elem) -> (L::Elem, R::Elem) {
        (l, self.right.identity())
    }

    pub fn from_right(&self, r: R::Elem) -> (L::Elem, R::Elem) {
        (self.left.identity(), r)
    }
}

impl<L: FiniteGroup, R: FiniteGroup> FiniteGroup for DirectProduct<L, R> {
    type Elem = (L::Elem, R::Elem);

    fn order(&self) -> u64 {
        self.left.order() * self.right.order()
    }

    fn identity(&self) -> Self::Elem {
        (self.left.identity(), self.right.identity())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.left.mul(&a.0, &b.0), self.right.mul(&a.1, &b.1))
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        (self.left.inv(&a.0), self.right.inv(&a.1))
    }

    fn n_gens(&self) -> usize {
        self.left.n_gens() + self.right.n_gens()
    }

    fn gen_name(&self, i: usize) -> &str {
        if i < self.left.n_gens() {
            self.left.gen_name(i)
        } else {
            self.right.gen_name(i - self.left.n_gens())
        }
    }

    fn gen(&self, i: usize) -> Self::Elem {
        if i < self.left.n_gens() {
            (self.left.gen(i), self.right.identity())
        } else {
            (self.left.identity(), self.right.gen(i - self.left.n_gens()))
        }
    }

    fn decompose(&self, e: &Self::Elem) -> Vec<i32> {
        let shift = self.left.n_gens() as i32;
        let mut word = self.left.decompose(&e.0);
        word.extend(
            self.right
                .decompose(&e.1)
                .into_iter()
                .map(|l| if l > 0 { l + shift } else { l - shift }),
        );
        word
    }

    fn defining_relators(&self) -> Vec<Vec<i32>> {
        let shift = self.left.n_gens() as i32;
        let mut rels = self.left.defining_relators();
        for r in self.right.defining_relators() {
            rels.push(
                r.into_iter()
                    .map(|l| if l > 0 { l + shift } else { l - shift })
                    .collect(),
            );
        }
        for i in 1..=shift {
            for j in 1..=self.right.n_gens() as i32 {
                rels.push(vec![i, j + shift, -i, -(j + shift)]);
            }
        }
        rels
    }

    fn elements(&self) -> Vec<Self::Elem> {
        let rights = self.right.elements();
        self.left
            .elements()
            .into_iter()
            .flat_map(|l| rights.iter().map(move |r| (l.clone(), r.clone())))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Generator-image maps
// ---------------------------------------------------------------------------

/// A homomorphism given by generator images, verified on construction
/// against the domain's defining relators.
#[derive(Clone, Debug)]
pub struct GroupMap<C: FiniteGroup> {
    images: Vec<C::Elem>,
}

impl<C: FiniteGroup> GroupMap<C> {
    pub fn checked<D: FiniteGroup>(
        domain: &D,
        codomain: &C,
        images: Vec<C::Elem>,
    ) -> Result<GroupMap<C>, ModelError> {
        assert_eq!(images.len(), domain.n_gens());
        let map = GroupMap { images };
        for (index, relator) in domain.defining_relators().iter().enumerate() {
            if map.apply_word(codomain, relator) != codomain.identity() {
                return Err(ModelError::RelatorViolated { relator: index });
            }
        }
        Ok(map)
    }

    pub fn images(&self) -> &[C::Elem] {
        &self.images
    }

    pub fn apply_word(&self, codomain: &C, word: &[i32]) -> C::Elem {
        let mut acc = codomain.identity();
        for &letter in word {
            let img = &self.images[letter.unsigned_abs() as usize - 1];
            let img = if letter > 0 {
                img.clone()
            } else {
                codomain.inv(img)
            };
            acc = codomain.mul(&acc, &img);
        }
        acc
    }

    pub fn apply<D: FiniteGroup>(&self, domain: &D, codomain: &C, e: &D::Elem) -> C::Elem {
        self.apply_word(codomain, &domain.decompose(e))
    }

    /// Image subgroup order by closure.
    pub fn image_order(&self, codomain: &C, budget: usize) -> Result<u64, ModelError> {
        subgroup_order(codomain, &self.images, budget)
    }
}

/// Realizes an endomorphism of `group` as a permutation of an enumerated
/// element list; fails if the map is not bijective.
pub fn endomorphism_perm<G: FiniteGroup>(
    group: &G,
    map: &GroupMap<G>,
    elements: &[G::Elem],
    index: &HashMap<G::Elem, u32>,
) -> Result<Perm, ModelError> {
    let mut images = Vec::with_capacity(elements.len());
    for e in elements {
        let img = map.apply(group, group, e);
        images.push(index[&img]);
    }
    Perm::from_images(images).ok_or(ModelError::NotBijective)
}

// ---------------------------------------------------------------------------
// Semidirect products
// ---------------------------------------------------------------------------

/// `base ⋊ actor`, with the actor a coset-enumerated group and the action
/// given per actor element as a permutation of the enumerated base.
///
/// Elements are `(base index, actor element)` pairs; multiplication twists
/// the right base component by the left actor component. No multiplication
/// table is ever built.
#[derive(Clone, Debug)]
pub struct Semidirect<B: FiniteGroup> {
    pub base: B,
    pub actor: CosetGroup,
    base_elems: Vec<B::Elem>,
    base_index: HashMap<B::Elem, u32>,
    /// Action permutation of each actor element on base indices.
    action: Vec<Perm>,
}

impl<B: FiniteGroup> Semidirect<B> {
    pub fn base_elems(&self) -> &[B::Elem] {
        &self.base_elems
    }

    pub fn base_index(&self, e: &B::Elem) -> u32 {
        self.base_index[e]
    }

    pub fn from_base(&self, e: &B::Elem) -> (u32, u32) {
        (self.base_index[e], self.actor.identity())
    }

    pub fn from_actor(&self, a: u32) -> (u32, u32) {
        (0, a)
    }

    pub fn base_part(&self, e: &(u32, u32)) -> &B::Elem {
        &self.base_elems[e.0 as usize]
    }

    pub fn action_of(&self, actor_elem: u32) -> &Perm {
        &self.action[actor_elem as usize]
    }
}

/// Builds `base ⋊ actor` from verified automorphisms, one per actor
/// generator. The actor's defining relators must hold for the induced
/// permutations, which makes the action a genuine actor-indexed family.
pub fn semidirect_product<B: FiniteGroup>(
    base: B,
    actor: CosetGroup,
    gen_actions: &[GroupMap<B>],
) -> Result<Semidirect<B>, ModelError> {
    assert_eq!(gen_actions.len(), actor.n_gens());
    let base_elems = base.elements();
    debug_assert_eq!(base_elems[0], base.identity());
    let mut base_index = HashMap::with_capacity(base_elems.len());
    for (i, e) in base_elems.iter().enumerate() {
        base_index.insert(e.clone(), i as u32);
    }
    let gen_perms: Vec<Perm> = gen_actions
        .iter()
        .map(|m| endomorphism_perm(&base, m, &base_elems, &base_index))
        .collect::<Result<_, _>>()?;
    for (index, relator) in actor.defining_relators().iter().enumerate() {
        let mut acc = Perm::identity(base_elems.len());
        for &letter in relator {
            let p = &gen_perms[letter.unsigned_abs() as usize - 1];
            acc = if letter > 0 {
                acc.then(p)
            } else {
                acc.then(&p.inverse())
            };
        }
        if !acc.is_identity() {
            return Err(ModelError::RelatorViolated { relator: index });
        }
    }
    // Extend the action to every actor element along its defining word.
    let mut action = Vec::with_capacity(actor.order() as usize);
    for e in 0..actor.order() as u32 {
        let mut acc = Perm::identity(base_elems.len());
        for &letter in &actor.decompose(&e) {
            let p = &gen_perms[letter.unsigned_abs() as usize - 1];
            acc = if letter > 0 {
                acc.then(p)
            } else {
                acc.then(&p.inverse())
            };
        }
        action.push(acc);
    }
    Ok(Semidirect {
        base,
        actor,
        base_elems,
        base_index,
        action,
    })
}

impl<B: FiniteGroup> FiniteGroup for Semidirect<B> {
    /// `(base element index, actor element)`.
    type Elem = (u32, u32);

    fn order(&self) -> u64 {
        self.base.order() * self.actor.order()
    }

    fn identity(&self) -> (u32, u32) {
        (0, 0)
    }

    fn mul(&self, a: &(u32, u32), b: &(u32, u32)) -> (u32, u32) {
        let twisted = self.action[a.1 as usize].apply(b.0);
        let base = self.base.mul(
            &self.base_elems[a.0 as usize],
            &self.base_elems[twisted as usize],
        );
        (self.base_index[&base], self.actor.mul(&a.1, &b.1))
    }

    fn inv(&self, a: &(u32, u32)) -> (u32, u32) {
        let actor_inv = self.actor.inv(&a.1);
        let base_inv = self.base.inv(&self.base_elems[a.0 as usize]);
        let twisted = self.action[actor_inv as usize].apply(self.base_index[&base_inv]);
        (twisted, actor_inv)
    }

    fn n_gens(&self) -> usize {
        self.base.n_gens() + self.actor.n_gens()
    }

    fn gen_name(&self, i: usize) -> &str {
        if i < self.base.n_gens() {
            self.base.gen_name(i)
        } else {
            self.actor.gen_name(i - self.base.n_gens())
        }
    }

    fn gen(&self, i: usize) -> (u32, u32) {
        if i < self.base.n_gens() {
            (self.base_index[&self.base.gen(i)], 0)
        } else {
            (0, self.actor.gen(i - self.base.n_gens()))
        }
    }

    fn decompose(&self, e: &(u32, u32)) -> Vec<i32> {
        let shift = self.base.n_gens() as i32;
        let mut word = self.base.decompose(&self.base_elems[e.0 as usize]);
        word.extend(
            self.actor
                .decompose(&e.1)
                .into_iter()
                .map(|l| if l > 0 { l + shift } else { l - shift }),
        );
        word
    }

    fn defining_relators(&self) -> Vec<Vec<i32>> {
        let shift = self.base.n_gens() as i32;
        let mut rels = self.base.defining_relators();
        for r in self.actor.defining_relators() {
            rels.push(
                r.into_iter()
                    .map(|l| if l > 0 { l + shift } else { l - shift })
                    .collect(),
            );
        }
        // x g x⁻¹ = action(x)(g) for actor and base generators.
        for x in 0..self.actor.n_gens() {
            let perm = &self.action[self.actor.gen(x) as usize];
            for g in 0..self.base.n_gens() {
                let image_idx = perm.apply(self.base_index[&self.base.gen(g)]);
                let image_word = self.base.decompose(&self.base_elems[image_idx as usize]);
                let mut rel = vec![shift + x as i32 + 1, g as i32 + 1, -(shift + x as i32 + 1)];
                rel.extend(image_word.iter().rev().map(|&l| -l));
                rels.push(rel);
            }
        }
        rels
    }

    fn elements(&self) -> Vec<(u32, u32)> {
        let n_base = self.base_elems.len() as u32;
        let n_actor = self.actor.order() as u32;
        (0..n_base)
            .flat_map(|b| (0..n_actor).map(move |a| (b, a)))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// The auxiliary groups K, B(ℬ∪c, n), B(𝒳, n), P, Q and the maps between them
// ---------------------------------------------------------------------------

/// The twisting automorphism of `P = B(ℬ∪c, n) × K` sending `c ↦ c·b_i` and
/// fixing every `b_j` and all of `K`; it is the conjugation the `x_i`
/// stable letters induce.
pub fn zeta_automorphism(i: usize, p: &PGroup) -> Result<GroupMap<PGroup>, ModelError> {
    let m = p.left.n_gens() - 1;
    if i >= m {
        return Err(ModelError::Unsupported(format!(
            "twist index {i} out of range for {m} b-generators"
        )));
    }
    let b_i = p.left.gen(i);
    let c = p.left.gen(m);
    let mut images: Vec<(u32, u32)> = Vec::new();
    for j in 0..m {
        images.push(p.from_left(p.left.gen(j)));
    }
    images.push(p.from_left(p.left.mul(&c, &b_i)));
    for k in 0..p.right.n_gens() {
        images.push(p.from_right(p.right.gen(k)));
    }
    GroupMap::checked(p, p, images)
}

/// The embedding of `B(ℬ∪c, n)` into `P` sending `c ↦ c` and
/// `b_i ↦ b_i·a_i`; its image is the second associated subgroup of the
/// stable letter `y`. Verified injective by closing the image.
pub fn kappa_embedding(p: &PGroup) -> Result<GroupMap<PGroup>, ModelError> {
    let m = p.left.n_gens() - 1;
    if p.right.n_gens() < m {
        return Err(ModelError::Unsupported(
            "K must have one generator per b-letter".into(),
        ));
    }
    let mut images: Vec<(u32, u32)> = Vec::new();
    for i in 0..m {
        images.push((p.left.gen(i), p.right.gen(i)));
    }
    images.push(p.from_left(p.left.gen(m)));
    let map = GroupMap::checked(&p.left, p, images)?;
    let image = map.image_order(p, DEFAULT_ELEMENT_BUDGET)?;
    if image != p.left.order() {
        return Err(ModelError::NotInjective {
            image,
            domain: p.left.order(),
        });
    }
    Ok(map)
}

/// The full bundle of auxiliary models for one construction step:
/// `K = H/Hⁿ`, `B(ℬ∪c, n)`, `B(𝒳, n)`, `P = B(ℬ∪c, n) × K`, the twisting
/// automorphisms, the permutation group they generate, the embedding
/// `κ : B(ℬ∪c, n) → P`, and `Q = P ⋊ B(𝒳, n)`.
pub struct AuxiliaryModels {
    pub n: u64,
    pub arity: usize,
    pub p: PGroup,
    pub x: CosetGroup,
    pub q: QGroup,
    pub zeta: Vec<GroupMap<PGroup>>,
    /// ⟨ζ̂_i⟩ as permutations of the `B(ℬ∪c, n)` element set.
    pub zeta_group: PermGroup,
    pub kappa: GroupMap<PGroup>,
}

impl AuxiliaryModels {
    /// Builds the bundle for `|I| = arity` at exponent `n ∈ {2, 3}` over a
    /// given model of `K` (whose first `arity` generators play `a_1…a_m`).
    pub fn build(arity: usize, n: u64, k: CosetGroup) -> Result<AuxiliaryModels, ModelError> {
        AuxiliaryModels::build_bounded(arity, n, k, DEFAULT_MAX_COSETS)
    }

    pub fn build_bounded(
        arity: usize,
        n: u64,
        k: CosetGroup,
        max_cosets: usize,
    ) -> Result<AuxiliaryModels, ModelError> {
        if arity < 2 {
            return Err(ModelError::Unsupported(format!(
                "the construction needs |I| ≥ 2, got {arity}"
            )));
        }
        let mut bc_names: Vec<String> = (1..=arity).map(|i| format!("b{i}")).collect();
        bc_names.push("c".into());
        let bc = burnside_group_named(bc_names, n, max_cosets)?;
        let x_names: Vec<String> = (1..=arity).map(|i| format!("x{i}")).collect();
        let x = burnside_group_named(x_names, n, max_cosets)?;

        let p = DirectProduct::new(bc, k);
        let zeta: Vec<GroupMap<PGroup>> = (0..arity)
            .map(|i| zeta_automorphism(i, &p))
            .collect::<Result<_, _>>()?;
        for z in &zeta {
            let zn = power_of_map(&p, z, n);
            for g in 0..p.n_gens() {
                if zn.images()[g] != p.gen(g) {
                    return Err(ModelError::ExponentFailed { expected: n });
                }
            }
        }

        // ζ̂_i restricted to B(ℬ∪c, n): the b/c components of the images.
        let mut zeta_perms = Vec::new();
        for i in 0..arity {
            let b_i = p.left.gen(i);
            let c = p.left.gen(p.left.n_gens() - 1);
            let mut images: Vec<u32> = (0..p.left.n_gens() - 1).map(|j| p.left.gen(j)).collect();
            images.push(p.left.mul(&c, &b_i));
            let map = GroupMap::<CosetGroup> { images };
            let mut perm_images = Vec::with_capacity(p.left.order() as usize);
            for e in 0..p.left.order() as u32 {
                perm_images.push(map.apply(&p.left, &p.left, &e));
            }
            zeta_perms.push(Perm::from_images(perm_images).ok_or(ModelError::NotBijective)?);
        }
        let zeta_group = PermGroup::close(
            (1..=arity).map(|i| format!("z{i}")).collect(),
            zeta_perms,
            DEFAULT_ELEMENT_BUDGET,
        )
        .ok_or(ModelError::BudgetExceeded(DEFAULT_ELEMENT_BUDGET))?;
        // ⟨ζ_i⟩ must realize B(𝒳, n) itself for the semidirect product to
        // carry a faithful copy of it.
        if zeta_group.order() != x.order() {
            return Err(ModelError::Unsupported(format!(
                "twist group order {} differs from |B(X, n)| = {}",
                zeta_group.order(),
                x.order()
            )));
        }

        let kappa = kappa_embedding(&p)?;
        let q = semidirect_product(p.clone(), x.clone(), &zeta)?;
        Ok(AuxiliaryModels {
            n,
            arity,
            p,
            x,
            q,
            zeta,
            zeta_group,
            kappa,
        })
    }

    /// The reference instantiation: `K = B(arity, n)`, i.e. `H` free.
    pub fn reference(arity: usize, n: u64) -> Result<AuxiliaryModels, ModelError> {
        AuxiliaryModels::reference_bounded(arity, n, DEFAULT_MAX_COSETS)
    }

    pub fn reference_bounded(
        arity: usize,
        n: u64,
        max_cosets: usize,
    ) -> Result<AuxiliaryModels, ModelError> {
        let k_names: Vec<String> = (1..=arity).map(|i| format!("a{i}")).collect();
        let k = burnside_group_named(k_names, n, max_cosets)?;
        AuxiliaryModels::build_bounded(arity, n, k, max_cosets)
    }

    pub fn k(&self) -> &CosetGroup {
        &self.p.right
    }

    pub fn bc(&self) -> &CosetGroup {
        &self.p.left
    }

    /// Lifts a `P` element into `Q`.
    pub fn q_from_p(&self, e: &(u32, u32)) -> (u32, u32) {
        self.q.from_base(e)
    }

    /// Evaluates an `a`-letter word in `K` by alphabet position.
    pub fn eval_k(&self, alphabet: &[crate::words::Letter], word: &Word) -> Result<u32, ModelError> {
        eval_letter_word(self.k(), |l| alphabet.iter().position(|&a| a == l), word)
    }
}

fn power_of_map(p: &PGroup, map: &GroupMap<PGroup>, n: u64) -> GroupMap<PGroup> {
    let mut images: Vec<(u32, u32)> = (0..p.n_gens()).map(|g| p.gen(g)).collect();
    for _ in 0..n {
        images = images.iter().map(|e| map.apply(p, p, e)).collect();
    }
    GroupMap { images }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burnside_orders_exponent_two() {
        let b22 = burnside_group(2, 2).unwrap();
        assert_eq!(b22.order(), 4);
        let b42 = burnside_group(4, 2).unwrap();
        assert_eq!(b42.order(), 16);
    }

    #[test]
    fn burnside_two_three() {
        let b23 = burnside_group(2, 3).unwrap();
        assert_eq!(b23.order(), 27);
        assert!(b23.verify_exponent(3).is_ok());
        // c (any generator) has order exactly 3, not 1.
        assert_eq!(element_order(&b23, &b23.gen(0)), 3);
    }

    #[test]
    fn burnside_rejects_unsupported() {
        assert!(burnside_group(2, 5).is_err());
        assert!(burnside_group(5, 3).is_err());
    }

    #[test]
    fn longer_cube_relators_do_not_shrink_the_index() {
        let base = power_relators(2, 3, CUBE_WORD_BOUND);
        let longer = power_relators(2, 3, CUBE_WORD_BOUND + 1);
        let g1 = CosetGroup::enumerate(vec!["a".into(), "b".into()], base, 100_000).unwrap();
        let g2 = CosetGroup::enumerate(vec!["a".into(), "b".into()], longer, 100_000).unwrap();
        assert_eq!(g1.order(), g2.order());
    }

    #[test]
    fn coset_group_arithmetic() {
        let g = burnside_group(2, 3).unwrap();
        let a = g.gen(0);
        let b = g.gen(1);
        assert_eq!(g.mul(&a, &g.inv(&a)), g.identity());
        let ab = g.mul(&a, &b);
        assert_eq!(element_order(&g, &ab), 3);
        // Regular representation: decompose replays to the element.
        for e in 0..g.order() as u32 {
            assert_eq!(g.eval_word(&g.decompose(&e)), e);
        }
    }

    #[test]
    fn direct_product_order_and_laws() {
        let b23 = burnside_group(2, 3).unwrap();
        let b22 = burnside_group(2, 2).unwrap();
        let p = DirectProduct::new(b23, b22);
        assert_eq!(p.order(), 108);
        let g0 = p.gen(0);
        let g2 = p.gen(2);
        // Cross-factor generators commute.
        assert_eq!(p.mul(&g0, &g2), p.mul(&g2, &g0));
        let e = p.mul(&g0, &p.inv(&g0));
        assert_eq!(e, p.identity());
        assert_eq!(p.elements().len(), 108);
    }

    #[test]
    fn subgroup_and_exponent_helpers() {
        let b33 = burnside_group(3, 3).unwrap();
        assert_eq!(b33.order(), 2187);
        // Two of the three generators span a copy of B(2,3).
        let sub = subgroup_order(&b33, &[b33.gen(0), b33.gen(1)], 100_000).unwrap();
        assert_eq!(sub, 27);
        assert_eq!(element_order(&b33, &b33.gen(2)), 3);
        assert_eq!(element_order(&b33, &b33.identity()), 1);
        assert!(exponent_check(&b33, 3, 0, 50).is_none());
        assert!(exponent_check(&b33, 2, 0, 50).is_some());
    }

    #[test]
    fn models_satisfy_their_defining_relators() {
        let aux = AuxiliaryModels::reference(2, 3).unwrap();
        fn check<G: FiniteGroup>(g: &G) {
            for relator in g.defining_relators() {
                assert_eq!(g.eval_word(&relator), g.identity());
            }
        }
        check(aux.k());
        check(aux.bc());
        check(&aux.x);
        check(&aux.p);
        check(&aux.q);
    }

    #[test]
    fn auxiliary_models_reference_two_three() {
        let aux = AuxiliaryModels::reference(2, 3).unwrap();
        assert_eq!(aux.bc().order(), 2187);
        assert_eq!(aux.k().order(), 27);
        assert_eq!(aux.p.order(), 59049);
        assert_eq!(aux.x.order(), 27);
        assert_eq!(aux.zeta_group.order(), 27);
        assert_eq!(aux.q.order(), 59049 * 27);

        // ζ₁ sends c to c·b₁ and fixes b₂ and K pointwise; it is not the
        // identity and cubes to the identity.
        let c_pos = aux.p.left.n_gens() - 1;
        let z1 = &aux.zeta[0];
        assert_eq!(
            z1.images()[c_pos],
            aux.p.from_left(aux.p.left.mul(&aux.p.left.gen(c_pos), &aux.p.left.gen(0)))
        );
        assert_eq!(z1.images()[1], aux.p.gen(1));
        for k_gen in 0..aux.k().n_gens() {
            assert_eq!(z1.images()[c_pos + 1 + k_gen], aux.p.gen(c_pos + 1 + k_gen));
        }
        assert_ne!(z1.images()[c_pos], aux.p.gen(c_pos));
        assert!(aux.zeta_group.gens()[0].then(&aux.zeta_group.gens()[0]).then(&aux.zeta_group.gens()[0]).is_identity());

        // κ is injective with image of full B(ℬ∪c, 3) order.
        assert_eq!(
            aux.kappa.image_order(&aux.p, DEFAULT_ELEMENT_BUDGET).unwrap(),
            2187
        );
        assert_eq!(aux.kappa.images()[2], aux.p.from_left(aux.p.left.gen(2)));
        // Composed with the projection onto K, κ is the b_i ↦ a_i shift.
        for i in 0..aux.arity {
            assert_eq!(aux.kappa.images()[i].1, aux.k().gen(i));
        }

        // Q twists: x₁ c x₁⁻¹ = c b₁ and x₁ b₂ x₁⁻¹ = b₂ in Q.
        let q = &aux.q;
        let x1 = q.gen(5);
        let c = q.gen(2);
        let b1 = q.gen(0);
        let b2 = q.gen(1);
        let conj = q.mul(&q.mul(&x1, &c), &q.inv(&x1));
        assert_eq!(conj, q.mul(&c, &b1));
        assert_eq!(q.mul(&q.mul(&x1, &b2), &q.inv(&x1)), b2);

        // P has exponent 3; Q has exponent dividing 9 with a genuine
        // order-9 element.
        assert!(exponent_check(&aux.p, 3, 1, 100).is_none());
        assert!(exponent_check(q, 9, 1, 100).is_none());
        let witness = q.mul(&c, &x1);
        assert_eq!(element_order(q, &witness), 9);
    }
}
