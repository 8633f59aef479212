//! Replayable certificates that a word lies in the normal closure of a
//! presentation's relators.
//!
//! A certificate is a trace of elementary moves (relator insertion and
//! deletion at a position, free reduction, and conjugation of the goal word)
//! taking the start word to the empty word. Every move visibly preserves
//! membership in the normal closure, so an accepted certificate is a proof
//! that its start word is trivial in the presented group. The state is kept
//! freely reduced after every move, and positions index the reduced word.
//!
//! [`derive_power_relation`] compiles, for a word `W` over a tower level's
//! base alphabet, a certificate for `Wⁿ`: it introduces `(c·W(ℬ))ⁿ` from the
//! `cⁿ`, conjugation and commutation relators, shuffles `Wⁿ` into the blocks
//! with the commutation relators, strips the stable letter by a goal
//! conjugation, and kills the introduced word again.

use thiserror::Error;

use crate::presentation::{ConstructionView, Presentation, TowerLevel, ViewError};
use crate::words::{Family, Letter, Sign, Word, WordError};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Step {
    InsertRelator {
        position: usize,
        relator: usize,
        sign: Sign,
    },
    DeleteRelator {
        position: usize,
        relator: usize,
        sign: Sign,
    },
    FreeReduce,
    ConjugateGoal {
        conjugator: Word,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub presentation_digest: String,
    pub start: Word,
    pub steps: Vec<Step>,
    pub end: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub accepted: bool,
    pub failing_step: Option<usize>,
    pub reason: Option<String>,
}

impl VerifyReport {
    fn accept() -> VerifyReport {
        VerifyReport {
            accepted: true,
            failing_step: None,
            reason: None,
        }
    }

    fn reject(step: Option<usize>, reason: impl Into<String>) -> VerifyReport {
        VerifyReport {
            accepted: false,
            failing_step: step,
            reason: Some(reason.into()),
        }
    }
}

/// Bound on the estimated step count of a compiled certificate; the
/// construction is quadratic in the step exponent, so deep tower levels are
/// rejected instead of churning forever.
pub const MAX_COMPILED_STEPS: u64 = 10_000_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error("certificate digest {cert} does not match the presentation digest {presentation}")]
    DigestMismatch { cert: String, presentation: String },
    #[error("word uses letter `{0}` outside the level's base alphabet")]
    LetterOutsideBase(String),
    #[error("compiling this certificate would take about {0} steps, beyond the {MAX_COMPILED_STEPS} bound")]
    TooLarge(u64),
    #[error("certificate does not verify: {0}")]
    NotVerifying(String),
    #[error(transparent)]
    View(#[from] ViewError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("cannot parse certificate line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Replays one step; errors describe why the move is illegal in this state.
pub fn replay_step(p: &Presentation, state: &Word, step: &Step) -> Result<Word, String> {
    match step {
        Step::InsertRelator {
            position,
            relator,
            sign,
        } => {
            let relator_word = relator_power(p, *relator, *sign)?;
            if *position > state.len() {
                return Err(format!(
                    "insert position {position} beyond word length {}",
                    state.len()
                ));
            }
            let mut letters = state.letters()[..*position].to_vec();
            letters.extend_from_slice(relator_word.letters());
            letters.extend_from_slice(&state.letters()[*position..]);
            Ok(Word::from_letters(letters))
        }
        Step::DeleteRelator {
            position,
            relator,
            sign,
        } => {
            let relator_word = relator_power(p, *relator, *sign)?;
            let end = position + relator_word.len();
            if end > state.len() {
                return Err(format!(
                    "delete window {position}..{end} beyond word length {}",
                    state.len()
                ));
            }
            if state.letters()[*position..end] != *relator_word.letters() {
                return Err(format!(
                    "relator {relator} (sign {sign}) is not literally present at {position}"
                ));
            }
            let mut letters = state.letters()[..*position].to_vec();
            letters.extend_from_slice(&state.letters()[end..]);
            Ok(Word::from_letters(letters))
        }
        Step::FreeReduce => Ok(state.clone()),
        Step::ConjugateGoal { conjugator } => Ok(state.conjugate(conjugator)),
    }
}

fn relator_power(p: &Presentation, relator: usize, sign: Sign) -> Result<Word, String> {
    if sign != 1 && sign != -1 {
        return Err(format!("sign must be ±1, got {sign}"));
    }
    let word = p
        .relators()
        .get(relator)
        .ok_or_else(|| format!("relator index {relator} out of range"))?;
    Ok(if sign == 1 { word.clone() } else { word.invert() })
}

/// Replays a certificate. Digest mismatch is an error; replay failures and a
/// nonempty terminal word reject with the failing step index.
pub fn verify(p: &Presentation, cert: &Certificate) -> Result<VerifyReport, DerivationError> {
    let digest = p.digest();
    if cert.presentation_digest != digest {
        return Err(DerivationError::DigestMismatch {
            cert: cert.presentation_digest.clone(),
            presentation: digest,
        });
    }
    let mut state = cert.start.clone();
    for (i, step) in cert.steps.iter().enumerate() {
        match replay_step(p, &state, step) {
            Ok(next) => state = next,
            Err(reason) => return Ok(VerifyReport::reject(Some(i), reason)),
        }
    }
    if state != cert.end {
        return Ok(VerifyReport::reject(
            None,
            format!("terminal word is `{state}`, certificate claims `{}`", cert.end),
        ));
    }
    if !cert.end.is_empty() {
        return Ok(VerifyReport::reject(None, "terminal word is not empty"));
    }
    Ok(VerifyReport::accept())
}

/// A conjugated relator power `g R^σ g⁻¹`; certificates factor into these.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factor {
    pub conjugator: Word,
    pub relator: usize,
    pub sign: Sign,
}

impl Factor {
    pub fn word(&self, p: &Presentation) -> Word {
        let r = relator_power(p, self.relator, self.sign).expect("factor is well formed");
        r.conjugate(&self.conjugator)
    }
}

/// Rewrites a verifying certificate into a product of conjugated relator
/// powers equal to its start word in the free group.
pub fn extract_factors(p: &Presentation, cert: &Certificate) -> Result<Vec<Factor>, DerivationError> {
    let report = verify(p, cert)?;
    if !report.accepted {
        return Err(DerivationError::NotVerifying(
            report.reason.unwrap_or_default(),
        ));
    }
    let mut factors = Vec::new();
    // Conjugations move the frame: later factors pick up the inverses of all
    // goal conjugators seen so far.
    let mut frame = Word::empty();
    let mut state = cert.start.clone();
    for step in &cert.steps {
        match step {
            Step::InsertRelator {
                position,
                relator,
                sign,
            } => {
                let prefix = state.slice(0..*position);
                factors.push(Factor {
                    conjugator: frame.multiply(&prefix),
                    relator: *relator,
                    sign: -sign,
                });
            }
            Step::DeleteRelator {
                position,
                relator,
                sign,
            } => {
                let prefix = state.slice(0..*position);
                factors.push(Factor {
                    conjugator: frame.multiply(&prefix),
                    relator: *relator,
                    sign: *sign,
                });
            }
            Step::FreeReduce => {}
            Step::ConjugateGoal { conjugator } => {
                frame = frame.multiply(&conjugator.invert());
            }
        }
        state = replay_step(p, &state, step).expect("verified above");
    }
    Ok(factors)
}

// ---------------------------------------------------------------------------
// Trace construction
// ---------------------------------------------------------------------------

struct TraceBuilder<'p> {
    p: &'p Presentation,
    state: Word,
    steps: Vec<Step>,
    /// When tracking, `initial = ∏ factors · state` holds throughout.
    factors: Vec<Factor>,
}

impl<'p> TraceBuilder<'p> {
    fn new(p: &'p Presentation, start: Word) -> TraceBuilder<'p> {
        TraceBuilder {
            p,
            state: start,
            steps: Vec::new(),
            factors: Vec::new(),
        }
    }

    fn push(&mut self, step: Step) {
        self.state = replay_step(self.p, &self.state, &step).expect("builder emits legal steps");
        self.steps.push(step);
    }

    fn conjugate_goal(&mut self, t: &Word) {
        self.push(Step::ConjugateGoal {
            conjugator: t.clone(),
        });
    }

    /// Deletes a literally present relator power, recording its factor.
    fn delete_at(&mut self, position: usize, relator: usize, sign: Sign) {
        let prefix = self.state.slice(0..position);
        self.factors.push(Factor {
            conjugator: prefix,
            relator,
            sign,
        });
        self.push(Step::DeleteRelator {
            position,
            relator,
            sign,
        });
    }

    /// Multiplies the state on the left by `g R^σ g⁻¹`. A single insertion
    /// suffices when `g` is a literal prefix of the state; otherwise the
    /// conjugation is realized by bracketing goal conjugations.
    fn apply_factor(&mut self, g: &Word, relator: usize, sign: Sign) {
        self.factors.push(Factor {
            conjugator: g.clone(),
            relator,
            sign: -sign,
        });
        if g.is_prefix_of(&self.state) {
            self.push(Step::InsertRelator {
                position: g.len(),
                relator,
                sign,
            });
        } else {
            self.conjugate_goal(&g.invert());
            self.push(Step::InsertRelator {
                position: 0,
                relator,
                sign,
            });
            self.conjugate_goal(g);
        }
    }

    fn expect_state(&self, expected: &Word, context: &str) {
        assert_eq!(
            &self.state, expected,
            "derivation state drifted during {context}"
        );
    }

    fn letter_at(&self, position: usize) -> (Letter, Sign) {
        self.state.letters()[position]
    }
}

/// `(g, σ)` with `[u^s, v^t] = g [u,v]^σ g⁻¹`.
fn commutator_power(u: Letter, s: Sign, v: Letter, t: Sign) -> (Word, Sign) {
    match (s, t) {
        (1, 1) => (Word::empty(), 1),
        (1, -1) => (Word::generator(v, -1), -1),
        (-1, 1) => (Word::generator(u, -1), -1),
        (-1, -1) => (
            Word::from_letters([(u, -1), (v, -1)]),
            1,
        ),
        _ => unreachable!("signs are ±1"),
    }
}

/// Swaps the adjacent letters at `position, position+1`, whose underlying
/// letters must be `{u, v}` with the relator `rel = [u, v]` available.
fn swap_adjacent(b: &mut TraceBuilder, rel: usize, u: Letter, v: Letter, position: usize) {
    let (l1, s1) = b.letter_at(position);
    let (l2, s2) = b.letter_at(position + 1);
    // The left multiplier is prefix · [l2^s2, l1^s1] · prefix⁻¹.
    let (g, sigma) = if (l2, l1) == (u, v) {
        commutator_power(u, s2, v, s1)
    } else if (l2, l1) == (v, u) {
        let (g, sigma) = commutator_power(u, s1, v, s2);
        (g, -sigma)
    } else {
        panic!("pair ({l1}, {l2}) does not match commutator [{u}, {v}]");
    };
    let conj = b.state.slice(0..position).multiply(&g);
    b.apply_factor(&conj, rel, sigma);
}

struct DeriveContext<'a> {
    view: &'a ConstructionView<'a>,
}

impl<'a> DeriveContext<'a> {
    /// Relator index of `[u, v]` where `u` is a base-alphabet letter and `v`
    /// is a fresh `b` letter or `c`.
    fn comm_base(&self, u: Letter, v: Letter) -> usize {
        let i = self.view.base_position(u).expect("base letter");
        if v == self.view.c {
            self.view.rel_comm_ac(i)
        } else {
            let j = (v.index().expect("b letter") - 1) as usize;
            self.view.rel_comm_ab(i, j)
        }
    }

    /// Relator index of `[x_i, b_j]`.
    fn comm_xb(&self, x: Letter, b: Letter) -> usize {
        let i = (x.index().expect("x letter") - 1) as usize;
        let j = (b.index().expect("b letter") - 1) as usize;
        self.view.rel_comm_xb(i, j)
    }

    fn is_base(&self, l: Letter) -> bool {
        self.view.base_position(l).is_some()
    }
}

/// Runs the collapse of `(c·W(ℬ))ⁿ` to the empty word: blocks are rewritten
/// right to left into `W(𝒳) c W(𝒳)⁻¹` through the `x`-conjugation and
/// `[x, b]` relators, after which the accumulated `cⁿ` is deleted.
///
/// The builder's factor trail then satisfies `(c·W(ℬ))ⁿ = ∏ factors`.
fn collapse_power_blocks(b: &mut TraceBuilder, ctx: &DeriveContext, w: &Word) {
    let view = ctx.view;
    let n = view.step_exponent as usize;
    let len = w.len();
    let bw = view.substitute(w, Family::B).expect("letters checked");
    let xw = view.substitute(w, Family::X).expect("letters checked");

    for block in (0..n).rev() {
        let beta = block * (1 + len);
        for t in 0..len {
            let (b_letter, sign) = bw.letters()[t];
            // Move the next b left past the inverted x-run onto the c.
            for q in (beta + t + 1..=beta + 2 * t).rev() {
                let (x_letter, _) = b.letter_at(q);
                debug_assert_eq!(b.letter_at(q + 1), (b_letter, sign));
                let rel = ctx.comm_xb(x_letter, b_letter);
                swap_adjacent(b, rel, x_letter, b_letter, q);
            }
            // Absorb `c b^±` into an x-conjugate of c.
            let pos = beta + t;
            debug_assert_eq!(b.letter_at(pos), (view.c, 1));
            debug_assert_eq!(b.letter_at(pos + 1), (b_letter, sign));
            let i = (b_letter.index().unwrap() - 1) as usize;
            let prefix = b.state.slice(0..pos);
            if sign == 1 {
                b.apply_factor(&prefix, view.rel_conj_x(i), 1);
            } else {
                let x_letter = view.x_letters[i];
                let g2 = prefix.multiply(&Word::generator(x_letter, -1));
                b.apply_factor(&g2, view.rel_conj_x(i), -1);
                let g1 = g2.multiply(&Word::generator(view.c, 1));
                b.apply_factor(&g1, ctx.comm_xb(x_letter, b_letter), 1);
            }
        }
    }
    // State is now W(𝒳) cⁿ W(𝒳)⁻¹.
    let mut expected = xw.clone();
    expected = expected.multiply(&Word::generator(view.c, 1).pow(view.step_exponent));
    expected = expected.multiply(&xw.invert());
    b.expect_state(&expected, "power-block collapse");
    b.delete_at(len, view.rel_c_power(), 1);
    b.expect_state(&Word::empty(), "c-power deletion");
}

/// Compiles a certificate for `Wⁿ = 1` over a tower level built by one
/// construction step, `W` a word over the level's base alphabet.
pub fn derive_power_relation(
    level: &TowerLevel,
    word: &Word,
) -> Result<Certificate, DerivationError> {
    let view = ConstructionView::new(level)?;
    let ctx = DeriveContext { view: &view };
    let p = &level.presentation;
    for &(letter, _) in word.letters() {
        if view.base_position(letter).is_none() {
            return Err(DerivationError::LetterOutsideBase(letter.token()));
        }
    }
    let n = view.step_exponent;
    let estimated = n * n * (word.len() as u64 + 1) * (word.len() as u64 + 1);
    if estimated > MAX_COMPILED_STEPS {
        return Err(DerivationError::TooLarge(estimated));
    }
    let start = word.pow(n);
    let mut b = TraceBuilder::new(p, start.clone());

    if word.is_empty() {
        return Ok(Certificate {
            presentation_digest: p.digest(),
            start,
            steps: b.steps,
            end: Word::empty(),
        });
    }

    // Work with the cyclically reduced core: Wⁿ = u·coreⁿ·u⁻¹.
    let (u, core) = word.cyclic_decompose();
    if !u.is_empty() {
        b.conjugate_goal(&u.invert());
    }
    let w = core;
    let len = w.len();
    b.expect_state(&w.pow(n), "cyclic reduction");

    let bw = view.substitute(&w, Family::B).expect("letters checked");
    let c_word = Word::single(view.c);
    let v_block = c_word.multiply(&bw);
    let v_power = v_block.pow(n);

    // Collapse (c·W(ℬ))ⁿ on a scratch builder to learn its factorization.
    let factors = {
        let mut scratch = TraceBuilder::new(p, v_power.clone());
        collapse_power_blocks(&mut scratch, &ctx, &w);
        scratch.factors
    };
    // Introduce (c·W(ℬ))ⁿ on the left by replaying those factors backwards.
    for f in factors.iter().rev() {
        b.apply_factor(&f.conjugator, f.relator, f.sign);
    }
    b.expect_state(&v_power.multiply(&w.pow(n)), "power introduction");

    // Shuffle the Wⁿ tail into the blocks: bubble each base letter left past
    // the fresh letters it commutes with.
    let z_block = v_block.multiply(&w);
    let target = z_block.pow(n);
    loop {
        let state_letters = b.state.letters().to_vec();
        let target_letters = target.letters();
        debug_assert_eq!(state_letters.len(), target_letters.len());
        let Some(mismatch) = (0..state_letters.len())
            .find(|&i| state_letters[i] != target_letters[i])
        else {
            break;
        };
        let mover = state_letters[mismatch..]
            .iter()
            .position(|&(l, _)| ctx.is_base(l))
            .map(|offset| mismatch + offset)
            .expect("a base letter must follow the first mismatch");
        let (a_letter, _) = state_letters[mover];
        for q in (mismatch..mover).rev() {
            let (v_letter, _) = b.letter_at(q);
            let rel = ctx.comm_base(a_letter, v_letter);
            swap_adjacent(&mut b, rel, a_letter, v_letter, q);
        }
    }
    b.expect_state(&target, "block shuffle");

    // Rebuild each block as y (c·W(ℬ)) y⁻¹, left to right.
    for block in 0..n as usize {
        let pi = if block == 0 { 0 } else { block * (1 + len) + 2 };
        // Interleave: c b₁…b_L a₁…a_L → c (b₁a₁)…(b_L a_L).
        for j in 0..len {
            let (a_letter, a_sign) = w.letters()[j];
            let from = pi + len + j + 1;
            let to = pi + 2 * j + 2;
            for q in (to + 1..=from).rev() {
                let (v_letter, _) = b.letter_at(q - 1);
                debug_assert_eq!(b.letter_at(q), (a_letter, a_sign));
                let rel = ctx.comm_base(a_letter, v_letter);
                swap_adjacent(&mut b, rel, a_letter, v_letter, q - 1);
            }
        }
        // Rewrite pairs right to left: b^s a^s → y b^s y⁻¹.
        for j in (0..len).rev() {
            let pos = pi + 1 + 2 * j;
            let (a_letter, s) = w.letters()[j];
            let b_letter = bw.letters()[j].0;
            debug_assert_eq!(b.letter_at(pos), (b_letter, s));
            debug_assert_eq!(b.letter_at(pos + 1), (a_letter, s));
            let i = (b_letter.index().unwrap() - 1) as usize;
            let prefix = b.state.slice(0..pos);
            if s == 1 {
                b.apply_factor(&prefix, view.rel_conj_y(i), 1);
            } else {
                let g = prefix.multiply(&Word::from_letters([
                    (view.y, 1),
                    (b_letter, -1),
                    (view.y, -1),
                ]));
                b.apply_factor(&g, view.rel_conj_y(i), -1);
                b.apply_factor(&g, ctx.comm_base(a_letter, b_letter), 1);
            }
        }
        // c y → y c.
        debug_assert_eq!(b.letter_at(pi), (view.c, 1));
        debug_assert_eq!(b.letter_at(pi + 1), (view.y, 1));
        swap_adjacent(&mut b, view.rel_comm_yc(), view.y, view.c, pi);
    }
    let y_word = Word::single(view.y);
    let conjugated = v_power.conjugate(&y_word);
    b.expect_state(&conjugated, "stable-letter wrapping");

    // Strip the stable letter from the goal and kill the introduced word.
    b.conjugate_goal(&y_word.invert());
    b.expect_state(&v_power, "goal conjugation");
    collapse_power_blocks(&mut b, &ctx, &w);

    Ok(Certificate {
        presentation_digest: p.digest(),
        start,
        steps: b.steps,
        end: Word::empty(),
    })
}

/// Concatenation of consequences: a certificate for `U·V` from certificates
/// for `U` and `V`, replayed through their factorizations.
pub fn compose(
    p: &Presentation,
    c1: &Certificate,
    c2: &Certificate,
) -> Result<Certificate, DerivationError> {
    let mut factors = extract_factors(p, c1)?;
    factors.extend(extract_factors(p, c2)?);
    let start = c1.start.multiply(&c2.start);
    let mut b = TraceBuilder::new(p, start.clone());
    for f in &factors {
        b.apply_factor(&f.conjugator, f.relator, -f.sign);
    }
    b.expect_state(&Word::empty(), "composition");
    Ok(Certificate {
        presentation_digest: p.digest(),
        start,
        steps: b.steps,
        end: Word::empty(),
    })
}

/// Conjugation of a consequence: a certificate for `t·V·t⁻¹`.
pub fn substitute_goal(
    p: &Presentation,
    cert: &Certificate,
    t: &Word,
) -> Result<Certificate, DerivationError> {
    let report = verify(p, cert)?;
    if !report.accepted {
        return Err(DerivationError::NotVerifying(
            report.reason.unwrap_or_default(),
        ));
    }
    let start = cert.start.conjugate(t);
    let mut steps = vec![Step::ConjugateGoal {
        conjugator: t.invert(),
    }];
    steps.extend(cert.steps.iter().cloned());
    Ok(Certificate {
        presentation_digest: cert.presentation_digest.clone(),
        start,
        steps,
        end: cert.end.clone(),
    })
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

impl Step {
    pub fn emit(&self) -> String {
        match self {
            Step::InsertRelator {
                position,
                relator,
                sign,
            } => format!("insert {position} {relator} {sign}"),
            Step::DeleteRelator {
                position,
                relator,
                sign,
            } => format!("delete {position} {relator} {sign}"),
            Step::FreeReduce => "reduce".into(),
            Step::ConjugateGoal { conjugator } => format!("conjugate {}", conjugator.emit()),
        }
    }
}

impl Certificate {
    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("presentation {}\n", self.presentation_digest));
        out.push_str(&format!("start: {}\n", self.start.emit()));
        out.push_str(&format!("end: {}\n", self.end.emit()));
        for step in &self.steps {
            out.push_str(&step.emit());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Certificate, DerivationError> {
        let err = |line: usize, message: &str| DerivationError::Parse {
            line: line + 1,
            message: message.into(),
        };
        let mut digest = None;
        let mut start = None;
        let mut end = None;
        let mut steps = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("presentation ") {
                digest = Some(rest.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("start:") {
                start = Some(Word::parse(rest).map_err(|e| err(no, &e.to_string()))?);
            } else if let Some(rest) = line.strip_prefix("end:") {
                end = Some(Word::parse(rest).map_err(|e| err(no, &e.to_string()))?);
            } else {
                let mut parts = line.split_whitespace();
                let kind = parts.next().unwrap();
                let step = match kind {
                    "insert" | "delete" => {
                        let nums: Vec<&str> = parts.collect();
                        if nums.len() != 3 {
                            return Err(err(no, "expected `<kind> <pos> <relator> <sign>`"));
                        }
                        let position = nums[0].parse().map_err(|_| err(no, "bad position"))?;
                        let relator = nums[1].parse().map_err(|_| err(no, "bad relator index"))?;
                        let sign: i8 = nums[2].parse().map_err(|_| err(no, "bad sign"))?;
                        if kind == "insert" {
                            Step::InsertRelator {
                                position,
                                relator,
                                sign,
                            }
                        } else {
                            Step::DeleteRelator {
                                position,
                                relator,
                                sign,
                            }
                        }
                    }
                    "reduce" => Step::FreeReduce,
                    "conjugate" => {
                        let rest: Vec<&str> = parts.collect();
                        let word = Word::parse(&rest.join(" "))
                            .map_err(|e| err(no, &e.to_string()))?;
                        Step::ConjugateGoal { conjugator: word }
                    }
                    other => return Err(err(no, &format!("unknown step kind `{other}`"))),
                };
                steps.push(step);
            }
        }
        Ok(Certificate {
            presentation_digest: digest.ok_or_else(|| err(0, "missing presentation header"))?,
            start: start.ok_or_else(|| err(0, "missing start line"))?,
            steps,
            end: end.ok_or_else(|| err(0, "missing end line"))?,
        })
    }
}
