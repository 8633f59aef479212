//! HNN-extension word machinery over finite base models: alternating words,
//! Britton reduction, normal forms, and word-problem decisions.
//!
//! A stable letter `t` carries associated subgroups `A_t`, `B_t` and an
//! isomorphism `φ_t : A_t → B_t` realized as lookup tables, so pinches
//! (`t g t⁻¹` with `g ∈ A_t`, or `t⁻¹ h t` with `h ∈ B_t`) are detected by
//! set membership and resolved by table application. Over a finite base this
//! decides the word problem: a pinch-free word of positive length is never
//! trivial, so triviality reduces to Britton reduction plus an identity test.

use std::collections::HashMap;

use thiserror::Error;

use crate::finite_models::{
    closure, AuxiliaryModels, FiniteGroup, ModelError, PGroup, QGroup,
};
use crate::words::Sign;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum HnnError {
    #[error("associated subgroup pairing is not single-valued; the map is not an isomorphism")]
    NotIsomorphism,
    #[error("subgroup closure exceeded the budget of {0}")]
    BudgetExceeded(usize),
    #[error("unknown stable letter `{0}`")]
    UnknownStableLetter(String),
    #[error("cannot parse alternating word: {0}")]
    Parse(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// An alternating word `S₀ t^{ε₁} S₁ … t^{ε_ℓ} S_ℓ` over a base model; the
/// length of interest is `ℓ`, the count of stable-letter occurrences.
/// Missing base syllables are the base identity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QyWord<E> {
    pub head: E,
    pub tail: Vec<(usize, Sign, E)>,
}

impl<E: Clone + Eq> QyWord<E> {
    pub fn from_base(e: E) -> QyWord<E> {
        QyWord {
            head: e,
            tail: Vec::new(),
        }
    }

    pub fn y_length(&self) -> usize {
        self.tail.len()
    }
}

/// A stable letter with its associated-subgroup isomorphism as a pair of
/// lookup tables.
#[derive(Clone, Debug)]
pub struct StableLetter<E> {
    pub name: String,
    forward: HashMap<E, E>,
    backward: HashMap<E, E>,
}

impl<E: Clone + Eq + std::hash::Hash> StableLetter<E> {
    pub fn domain_size(&self) -> usize {
        self.forward.len()
    }

    pub fn in_domain(&self, e: &E) -> bool {
        self.forward.contains_key(e)
    }

    pub fn in_image(&self, e: &E) -> bool {
        self.backward.contains_key(e)
    }

    pub fn apply(&self, e: &E) -> Option<&E> {
        self.forward.get(e)
    }

    pub fn apply_inverse(&self, e: &E) -> Option<&E> {
        self.backward.get(e)
    }

    pub fn domain(&self) -> impl Iterator<Item = &E> {
        self.forward.keys()
    }
}

/// Builds a stable letter from generator pairs `(a, φ(a))` by closing the
/// pair set; single-valuedness of the closure in both coordinates verifies
/// that `φ` is an isomorphism of the generated subgroups.
pub fn stable_letter<G: FiniteGroup>(
    base: &G,
    name: impl Into<String>,
    gen_pairs: &[(G::Elem, G::Elem)],
    budget: usize,
) -> Result<StableLetter<G::Elem>, HnnError> {
    let product = PairGroup { base };
    let pairs = closure(&product, gen_pairs, budget).map_err(|e| match e {
        ModelError::BudgetExceeded(b) => HnnError::BudgetExceeded(b),
        other => HnnError::Model(other),
    })?;
    let mut forward = HashMap::with_capacity(pairs.len());
    let mut backward = HashMap::with_capacity(pairs.len());
    for (a, b) in pairs {
        if forward.insert(a.clone(), b.clone()).is_some() {
            return Err(HnnError::NotIsomorphism);
        }
        if backward.insert(b, a).is_some() {
            return Err(HnnError::NotIsomorphism);
        }
    }
    Ok(StableLetter {
        name: name.into(),
        forward,
        backward,
    })
}

/// The direct square of a base model, used only to close pair sets.
struct PairGroup<'g, G: FiniteGroup> {
    base: &'g G,
}

impl<'g, G: FiniteGroup> FiniteGroup for PairGroup<'g, G> {
    type Elem = (G::Elem, G::Elem);

    fn order(&self) -> u64 {
        self.base.order() * self.base.order()
    }

    fn identity(&self) -> Self::Elem {
        (self.base.identity(), self.base.identity())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.mul(&a.0, &b.0), self.base.mul(&a.1, &b.1))
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        (self.base.inv(&a.0), self.base.inv(&a.1))
    }

    fn n_gens(&self) -> usize {
        0
    }

    fn gen_name(&self, _: usize) -> &str {
        unreachable!("pair groups have no named generators")
    }

    fn gen(&self, _: usize) -> Self::Elem {
        unreachable!("pair groups have no named generators")
    }

    fn decompose(&self, _: &Self::Elem) -> Vec<i32> {
        unreachable!("pair groups are not decomposed")
    }

    fn defining_relators(&self) -> Vec<Vec<i32>> {
        Vec::new()
    }

    fn elements(&self) -> Vec<Self::Elem> {
        unreachable!("pair groups are never enumerated")
    }
}

/// An HNN extension presented over a finite base model.
pub struct HnnData<G: FiniteGroup> {
    pub base: G,
    pub letters: Vec<StableLetter<G::Elem>>,
}

impl<G: FiniteGroup> HnnData<G> {
    pub fn letter_by_name(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l.name == name)
    }

    pub fn word_from_base(&self, e: G::Elem) -> QyWord<G::Elem> {
        QyWord::from_base(e)
    }

    /// Concatenates two alternating words, merging at the seam.
    pub fn multiply(&self, u: &QyWord<G::Elem>, v: &QyWord<G::Elem>) -> QyWord<G::Elem> {
        let mut out = u.clone();
        if out.tail.is_empty() {
            out.head = self.base.mul(&out.head, &v.head);
        } else {
            let last = out.tail.last_mut().unwrap();
            last.2 = self.base.mul(&last.2, &v.head);
        }
        out.tail.extend(v.tail.iter().cloned());
        out
    }

    pub fn invert(&self, u: &QyWord<G::Elem>) -> QyWord<G::Elem> {
        let mut syllables: Vec<&G::Elem> = vec![&u.head];
        for (_, _, s) in &u.tail {
            syllables.push(s);
        }
        let mut out = QyWord::from_base(self.base.inv(syllables[syllables.len() - 1]));
        for k in (0..u.tail.len()).rev() {
            let (letter, eps, _) = u.tail[k];
            out.tail.push((letter, -eps, self.base.inv(syllables[k])));
        }
        out
    }

    /// Removes the leftmost pinch until none remains. Pinches never increase
    /// the stable-letter count, so this terminates with a pinch-free word
    /// equal to the input in the HNN group.
    pub fn britton_reduce(&self, w: &QyWord<G::Elem>) -> QyWord<G::Elem> {
        let mut head = w.head.clone();
        let mut tail = w.tail.clone();
        'scan: loop {
            for k in 0..tail.len().saturating_sub(1) {
                let (l1, e1, _) = tail[k].clone();
                let (l2, e2, _) = tail[k + 1].clone();
                if l1 != l2 || e1 != -e2 {
                    continue;
                }
                let s = &tail[k].2;
                let letter = &self.letters[l1];
                let mapped = if e1 == 1 {
                    letter.apply(s)
                } else {
                    letter.apply_inverse(s)
                };
                let Some(mapped) = mapped.cloned() else {
                    continue;
                };
                // t^ε S t^-ε collapses; merge into the surrounding syllables.
                let right = tail[k + 1].2.clone();
                let merged_tail = self.base.mul(&mapped, &right);
                if k == 0 {
                    head = self.base.mul(&head, &merged_tail);
                } else {
                    let left = &mut tail[k - 1].2;
                    *left = self.base.mul(left, &merged_tail);
                }
                tail.drain(k..=k + 1);
                continue 'scan;
            }
            break;
        }
        QyWord { head, tail }
    }

    /// True iff the word is trivial in the HNN group: sound and complete
    /// over a finite base, since a pinch-free word of positive length is
    /// nontrivial and a length-zero word is its base syllable.
    pub fn is_trivial(&self, w: &QyWord<G::Elem>) -> bool {
        let reduced = self.britton_reduce(w);
        reduced.tail.is_empty() && reduced.head == self.base.identity()
    }

    /// Britton reduction followed by syllable normalization to coset
    /// representatives (the least element of each coset under the model's
    /// element ordering), processed right to left. Equal words get equal
    /// normal forms.
    pub fn normal_form(&self, w: &QyWord<G::Elem>) -> QyWord<G::Elem> {
        let mut reduced = self.britton_reduce(w);
        for k in (0..reduced.tail.len()).rev() {
            let (letter_id, eps, syllable) = reduced.tail[k].clone();
            let letter = &self.letters[letter_id];
            let subgroup: Box<dyn Iterator<Item = &G::Elem>> = if eps == 1 {
                Box::new(letter.forward.keys())
            } else {
                Box::new(letter.backward.keys())
            };
            let rep = subgroup
                .map(|u| self.base.mul(u, &syllable))
                .min()
                .expect("associated subgroups contain the identity");
            let quotient = self.base.mul(&syllable, &self.base.inv(&rep));
            let carried = if eps == 1 {
                letter.apply(&quotient)
            } else {
                letter.apply_inverse(&quotient)
            }
            .expect("quotient lies in the associated subgroup")
            .clone();
            reduced.tail[k].2 = rep;
            if k == 0 {
                reduced.head = self.base.mul(&reduced.head, &carried);
            } else {
                let left = &mut reduced.tail[k - 1].2;
                *left = self.base.mul(left, &carried);
            }
        }
        reduced
    }

    // -- text form ----------------------------------------------------------

    /// Parses `[gen tokens] t [gen tokens] t^-1 …`; base syllables are
    /// bracketed generator words, stable letters appear by name.
    pub fn parse_word(&self, text: &str) -> Result<QyWord<G::Elem>, HnnError> {
        let mut head = self.base.identity();
        let mut tail: Vec<(usize, Sign, G::Elem)> = Vec::new();
        let mut rest = text.trim();
        let mut seen_stable = false;
        while !rest.is_empty() {
            if let Some(after) = rest.strip_prefix('[') {
                let end = after
                    .find(']')
                    .ok_or_else(|| HnnError::Parse("unclosed `[`".into()))?;
                let inner = &after[..end];
                let value = self.eval_base_word(inner)?;
                if seen_stable {
                    let last = tail.last_mut().unwrap();
                    last.2 = self.base.mul(&last.2, &value);
                } else {
                    head = self.base.mul(&head, &value);
                }
                rest = after[end + 1..].trim_start();
            } else {
                let token_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
                let token = &rest[..token_end];
                let (name, eps) = match token.strip_suffix("^-1") {
                    Some(name) => (name, -1),
                    None => (token, 1),
                };
                let id = self
                    .letter_by_name(name)
                    .ok_or_else(|| HnnError::UnknownStableLetter(name.to_string()))?;
                tail.push((id, eps, self.base.identity()));
                seen_stable = true;
                rest = rest[token_end..].trim_start();
            }
        }
        Ok(QyWord { head, tail })
    }

    pub fn eval_base_word(&self, text: &str) -> Result<G::Elem, HnnError> {
        let mut acc = self.base.identity();
        for token in text.split_whitespace() {
            let (name, sign) = match token.strip_suffix("^-1") {
                Some(name) => (name, -1),
                None => (token, 1),
            };
            let g = self
                .base
                .gen_by_name(name)
                .ok_or_else(|| HnnError::Model(ModelError::UnknownGenerator(name.into())))?;
            let g = if sign > 0 { g } else { self.base.inv(&g) };
            acc = self.base.mul(&acc, &g);
        }
        Ok(acc)
    }

    /// Emits a word with base syllables spelled through `decompose`.
    pub fn emit_word(&self, w: &QyWord<G::Elem>) -> String {
        let mut parts = vec![self.emit_base(&w.head)];
        for (letter, eps, s) in &w.tail {
            let name = &self.letters[*letter].name;
            parts.push(if *eps == 1 {
                name.clone()
            } else {
                format!("{name}^-1")
            });
            parts.push(self.emit_base(s));
        }
        parts.retain(|p| !p.is_empty());
        if parts.is_empty() {
            "[]".into()
        } else {
            parts.join(" ")
        }
    }

    fn emit_base(&self, e: &G::Elem) -> String {
        if *e == self.base.identity() {
            return String::new();
        }
        let tokens: Vec<String> = self
            .base
            .decompose(e)
            .into_iter()
            .map(|l| {
                let name = self.base.gen_name(l.unsigned_abs() as usize - 1);
                if l > 0 {
                    name.to_string()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect();
        format!("[{}]", tokens.join(" "))
    }
}

// ---------------------------------------------------------------------------
// The two HNN models of the construction
// ---------------------------------------------------------------------------

/// The HNN extension of `Q` with one stable letter `y` conjugating the
/// `⟨b_i, c⟩` factor onto its shifted copy `⟨b_i a_i, c⟩`.
pub fn build_g_model(aux: &AuxiliaryModels) -> Result<HnnData<QGroup>, HnnError> {
    let q = aux.q.clone();
    let bc = aux.bc();
    let mut pairs = Vec::new();
    for i in 0..bc.n_gens() {
        let a_side = q.from_base(&aux.p.from_left(bc.gen(i)));
        let b_side = q.from_base(&aux.kappa.images()[i]);
        pairs.push((a_side, b_side));
    }
    let budget = bc.order() as usize * 4;
    let y = stable_letter(&q, "y", &pairs, budget)?;
    Ok(HnnData {
        base: q,
        letters: vec![y],
    })
}

/// The multiple HNN extension of `P` with stable letters `y` and `x_i`: `y`
/// conjugates `⟨b_i, c⟩` onto the shifted copy, each `x_i` twists `⟨b_i, c⟩`
/// onto itself by `c ↦ c b_i`.
pub fn build_e_model(aux: &AuxiliaryModels) -> Result<HnnData<PGroup>, HnnError> {
    let p = aux.p.clone();
    let bc = aux.bc();
    let budget = bc.order() as usize * 4;
    let mut letters = Vec::new();

    let mut y_pairs = Vec::new();
    for i in 0..bc.n_gens() {
        y_pairs.push((p.from_left(bc.gen(i)), aux.kappa.images()[i]));
    }
    letters.push(stable_letter(&p, "y", &y_pairs, budget)?);

    for i in 0..aux.arity {
        let mut x_pairs = Vec::new();
        for g in 0..bc.n_gens() {
            x_pairs.push((p.from_left(bc.gen(g)), aux.zeta[i].images()[g]));
        }
        letters.push(stable_letter(&p, format!("x{}", i + 1), &x_pairs, budget)?);
    }
    Ok(HnnData { base: p, letters })
}

/// One row of an embedding report: a base-alphabet word, whether it dies in
/// `K = H/Hⁿ`, and whether its image dies in the HNN model `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedRow {
    pub word: crate::words::Word,
    pub trivial_in_k: bool,
    pub trivial_in_e: bool,
}

/// For each word: is it trivial in `K`, and is its image trivial in `E`?
/// The two answers must agree when the models are coherent.
pub fn embed_check(
    aux: &AuxiliaryModels,
    e_model: &HnnData<PGroup>,
    alphabet: &[crate::words::Letter],
    words: &[crate::words::Word],
) -> Result<Vec<EmbedRow>, HnnError> {
    let mut rows = Vec::with_capacity(words.len());
    for word in words {
        let k_elem = aux.eval_k(alphabet, word)?;
        let trivial_in_k = k_elem == aux.k().identity();
        let image = e_model.word_from_base(aux.p.from_right(k_elem));
        let trivial_in_e = e_model.is_trivial(&image);
        rows.push(EmbedRow {
            word: word.clone(),
            trivial_in_k,
            trivial_in_e,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_models::AuxiliaryModels;
    use std::sync::OnceLock;

    fn aux() -> &'static AuxiliaryModels {
        static AUX: OnceLock<AuxiliaryModels> = OnceLock::new();
        AUX.get_or_init(|| AuxiliaryModels::reference(2, 3).unwrap())
    }

    #[test]
    fn g_model_conjugation_relations() {
        let aux = aux();
        let g = build_g_model(aux).unwrap();
        // y c y⁻¹ → c
        let w = g.parse_word("y [c] y^-1").unwrap();
        let reduced = g.britton_reduce(&w);
        assert_eq!(reduced.y_length(), 0);
        assert_eq!(reduced.head, g.parse_word("[c]").unwrap().head);
        // y b₁ y⁻¹ → b₁ a₁
        let w = g.parse_word("y [b1] y^-1").unwrap();
        let reduced = g.britton_reduce(&w);
        assert_eq!(reduced.y_length(), 0);
        assert_eq!(reduced.head, g.parse_word("[b1 a1]").unwrap().head);
        // y a₁ y⁻¹ is pinch-free: a₁ is in neither associated subgroup.
        let w = g.parse_word("y [a1] y^-1").unwrap();
        let reduced = g.britton_reduce(&w);
        assert_eq!(reduced.y_length(), 2);
        assert_eq!(reduced, w);
    }

    #[test]
    fn g_model_associated_subgroup_order() {
        let g = build_g_model(aux()).unwrap();
        assert_eq!(g.letters[0].domain_size(), 2187);
    }

    #[test]
    fn stable_letter_map_agrees_with_the_embedding_on_generators() {
        let aux = aux();
        let g = build_g_model(aux).unwrap();
        for i in 0..aux.bc().n_gens() {
            let domain_elem = aux.q.from_base(&aux.p.from_left(aux.bc().gen(i)));
            let expected = aux.q.from_base(&aux.kappa.images()[i]);
            assert_eq!(g.letters[0].apply(&domain_elem), Some(&expected));
        }
    }

    #[test]
    fn triviality_examples() {
        let aux = aux();
        let g = build_g_model(aux).unwrap();
        assert!(g.is_trivial(&g.parse_word("").unwrap()));
        assert!(g.is_trivial(&g.parse_word("y [c c c] y^-1").unwrap()));
        assert!(!g.is_trivial(&g.parse_word("[a1]").unwrap()));
        assert!(g.is_trivial(&g.parse_word("y [b1] y^-1 [a1^-1 b1^-1]").unwrap()));
        // w · w⁻¹ is always trivial.
        let w = g.parse_word("[c b1] y [a1 x2] y [b2]").unwrap();
        let product = g.multiply(&w, &g.invert(&w));
        assert!(g.is_trivial(&product));
    }

    #[test]
    fn e_model_relations() {
        let aux = aux();
        let e = build_e_model(aux).unwrap();
        // x₁ c x₁⁻¹ → c b₁, and x₁ fixes b₂.
        let w = e.parse_word("x1 [c] x1^-1").unwrap();
        let reduced = e.britton_reduce(&w);
        assert_eq!(reduced.y_length(), 0);
        assert_eq!(reduced.head, e.parse_word("[c b1]").unwrap().head);
        let w = e.parse_word("x1 [b2] x1^-1").unwrap();
        assert_eq!(
            e.britton_reduce(&w).head,
            e.parse_word("[b2]").unwrap().head
        );
        // y b₂ y⁻¹ → b₂ a₂ over the product base.
        let w = e.parse_word("y [b2] y^-1").unwrap();
        assert_eq!(
            e.britton_reduce(&w).head,
            e.parse_word("[b2 a2]").unwrap().head
        );
    }

    #[test]
    fn embed_check_agrees_on_short_words() {
        use crate::words::Word;
        let aux = aux();
        let e = build_e_model(aux).unwrap();
        let alphabet = [crate::words::Letter::a(1, 0), crate::words::Letter::a(2, 0)];
        let words = vec![
            Word::empty(),
            Word::parse("a1.0").unwrap(),
            Word::parse("a1.0 a1.0 a1.0").unwrap(),
            Word::parse("a1.0 a2.0^-1").unwrap(),
        ];
        let rows = embed_check(aux, &e, &alphabet, &words).unwrap();
        assert!(rows.iter().all(|r| r.trivial_in_k == r.trivial_in_e));
        assert!(rows[0].trivial_in_k);
        assert!(!rows[1].trivial_in_k);
        assert!(rows[2].trivial_in_k);
        assert!(!rows[3].trivial_in_k);
    }

    #[test]
    fn normal_forms_are_canonical_for_equal_words() {
        let aux = aux();
        let g = build_g_model(aux).unwrap();
        // The same element spelled two ways: y c y⁻¹ · w and c · w.
        let w = g.parse_word("[b1] y [a2]").unwrap();
        let u1 = g.multiply(&g.parse_word("y [c c c c] y^-1").unwrap(), &w);
        let u2 = g.multiply(&g.parse_word("[c]").unwrap(), &w);
        assert_eq!(g.normal_form(&u1), g.normal_form(&u2));
        // Normal forms preserve the element.
        let nf = g.normal_form(&u1);
        let diff = g.multiply(&u1, &g.invert(&nf));
        assert!(g.is_trivial(&diff));
    }

    #[test]
    fn word_text_round_trip() {
        let g = build_g_model(aux()).unwrap();
        let w = g.parse_word("[c b1] y [a1] y^-1 [x1 b2^-1]").unwrap();
        let text = g.emit_word(&w);
        let reparsed = g.parse_word(&text).unwrap();
        assert_eq!(w, reparsed);
    }
}
