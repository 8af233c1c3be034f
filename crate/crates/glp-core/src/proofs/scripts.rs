//! Scripted proof construction: a builder for assembling lines with
//! correct index bookkeeping, combinators that merge whole proofs, and
//! the two canonical GLP derivations used elsewhere in the crate (the
//! boxed reflection lemma [n]([0]q→q) and the chain of unifier proofs
//! [1](Q_k(p)→p)).
//!
//! Every public function here returns a proof that has already passed
//! `check_proof`; there is no unchecked construction path.

use super::{check_proof, HilbertProof, Justification, NecDiscipline, ProofError, ProofLine};
use crate::syntax::{Formula, LogicId};

/// Accumulates proof lines and hands out their indices, so scripts can
/// reference earlier lines without manual counting. `finish` runs the
/// checker, so a builder cannot produce an unchecked proof.
pub struct ProofBuilder {
    logic: LogicId,
    discipline: NecDiscipline,
    lines: Vec<ProofLine>,
}

impl ProofBuilder {
    pub fn new(logic: LogicId) -> Self {
        ProofBuilder {
            logic,
            discipline: NecDiscipline::default(),
            lines: Vec::new(),
        }
    }

    pub fn with_discipline(mut self, discipline: NecDiscipline) -> Self {
        self.discipline = discipline;
        self
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Appends a line and returns its index.
    pub fn line(&mut self, formula: Formula, justification: Justification) -> usize {
        self.lines.push(ProofLine {
            formula,
            justification,
        });
        self.lines.len() - 1
    }

    pub fn taut(&mut self, formula: Formula) -> usize {
        self.line(formula, Justification::Taut)
    }

    pub fn premise(&mut self, index: u32, formula: Formula) -> usize {
        self.line(formula, Justification::Premise { index })
    }

    /// Applies modus ponens to two earlier lines. The new line's formula
    /// is read off the implication line, which must be written as an
    /// implication (panics otherwise; scripts only ever build such lines).
    pub fn mp(&mut self, implication: usize, antecedent: usize) -> usize {
        let consequent = match &self.lines[implication].formula {
            Formula::Implies(_, b) => (**b).clone(),
            other => panic!("modus ponens on a non-implication line: {other}"),
        };
        self.line(
            consequent,
            Justification::Mp {
                implication,
                antecedent,
            },
        )
    }

    pub fn nec(&mut self, k: u32, line: usize) -> usize {
        let boxed = Formula::bx(k, self.lines[line].formula.clone());
        self.line(boxed, Justification::Nec { k, line })
    }

    /// From a line A→B derives [k]A→[k]B (necessitation, K, modus ponens).
    pub fn box_mono(&mut self, k: u32, implication: usize) -> usize {
        let (a, b) = match &self.lines[implication].formula {
            Formula::Implies(a, b) => ((**a).clone(), (**b).clone()),
            other => panic!("box_mono on a non-implication line: {other}"),
        };
        let boxed = self.nec(k, implication);
        let ax = self.line(
            Formula::implies(
                self.lines[boxed].formula.clone(),
                Formula::implies(Formula::bx(k, a), Formula::bx(k, b)),
            ),
            Justification::Axk { n: k },
        );
        self.mp(ax, boxed)
    }

    /// From lines A→B and B→C derives A→C via the syllogism tautology.
    /// The middle formulas may differ in diamond spelling; they only have
    /// to agree after normalization.
    pub fn syllogism(&mut self, ab: usize, bc: usize) -> usize {
        let split = |f: &Formula| match f {
            Formula::Implies(a, b) => ((**a).clone(), (**b).clone()),
            other => panic!("syllogism on a non-implication line: {other}"),
        };
        let (a, b) = split(&self.lines[ab].formula);
        let (b2, c) = split(&self.lines[bc].formula);
        let t = self.taut(Formula::implies(
            Formula::implies(a.clone(), b),
            Formula::implies(Formula::implies(b2, c.clone()), Formula::implies(a, c)),
        ));
        let step = self.mp(t, ab);
        self.mp(step, bc)
    }

    /// From a line A→B derives ¬B→¬A.
    pub fn contrapose(&mut self, implication: usize) -> usize {
        let (a, b) = match &self.lines[implication].formula {
            Formula::Implies(a, b) => ((**a).clone(), (**b).clone()),
            other => panic!("contrapose on a non-implication line: {other}"),
        };
        let t = self.taut(Formula::implies(
            self.lines[implication].formula.clone(),
            Formula::implies(Formula::not(b), Formula::not(a)),
        ));
        self.mp(t, implication)
    }

    /// From a line [k](X→Y) derives [k]X→[k]Y by instantiating K.
    fn box_mono_implication(&mut self, k: u32, boxed: usize) -> usize {
        let (x, y) = match &self.lines[boxed].formula {
            Formula::Box(kk, body) if *kk == k => match &**body {
                Formula::Implies(x, y) => ((**x).clone(), (**y).clone()),
                other => panic!("box does not contain an implication: {other}"),
            },
            other => panic!("line is not a [{k}]-boxed implication: {other}"),
        };
        let ax = self.line(
            Formula::implies(
                self.lines[boxed].formula.clone(),
                Formula::implies(Formula::bx(k, x), Formula::bx(k, y)),
            ),
            Justification::Axk { n: k },
        );
        self.mp(ax, boxed)
    }

    /// Restates an earlier line under a different spelling of the same
    /// normalized formula (a tautology plus modus ponens), so later steps
    /// can destructure it syntactically.
    fn respell(&mut self, line: usize, formula: Formula) -> usize {
        if self.lines[line].formula == formula {
            return line;
        }
        let t = self.taut(Formula::implies(
            self.lines[line].formula.clone(),
            formula,
        ));
        self.mp(t, line)
    }

    /// Copies every line of `other` to the end of this builder, shifting
    /// its internal line references. Returns the new index of `other`'s
    /// final line (panics if `other` has no lines; checked proofs never
    /// do).
    pub fn append_shifted(&mut self, other: &HilbertProof) -> usize {
        assert!(!other.lines.is_empty(), "cannot append an empty proof");
        let offset = self.lines.len();
        for l in &other.lines {
            let justification = match l.justification {
                Justification::Mp {
                    implication,
                    antecedent,
                } => Justification::Mp {
                    implication: implication + offset,
                    antecedent: antecedent + offset,
                },
                Justification::Nec { k, line } => Justification::Nec {
                    k,
                    line: line + offset,
                },
                other => other,
            };
            self.lines.push(ProofLine {
                formula: l.formula.clone(),
                justification,
            });
        }
        offset + other.lines.len() - 1
    }

    /// Closes the builder into a proof of `conclusion` and checks it.
    pub fn finish(self, conclusion: Formula) -> Result<HilbertProof, ProofError> {
        let proof = HilbertProof {
            logic: self.logic,
            discipline: self.discipline,
            lines: self.lines,
            conclusion,
        };
        check_proof(&proof)?;
        Ok(proof)
    }
}

fn same_logic(a: &HilbertProof, b: &HilbertProof) -> Result<LogicId, ProofError> {
    if a.logic != b.logic {
        return Err(ProofError::Combine(format!(
            "logic mismatch: {} vs {}",
            a.logic, b.logic
        )));
    }
    if a.discipline != b.discipline {
        return Err(ProofError::Combine("discipline mismatch".into()));
    }
    Ok(a.logic)
}

fn boxed_implication(pr: &HilbertProof) -> Result<(u32, Formula, Formula), ProofError> {
    match pr.conclusion.box_normal() {
        Formula::Box(k, body) => match &*body {
            Formula::Implies(a, b) => Ok((k, (**a).clone(), (**b).clone())),
            other => Err(ProofError::Combine(format!(
                "conclusion [{k}]({other}) is not a boxed implication"
            ))),
        },
        other => Err(ProofError::Combine(format!(
            "conclusion {other} is not a boxed implication"
        ))),
    }
}

/// From proofs of [k](A→B) and [k](B→C), produces a proof of [k](A→C).
pub fn syllogism_under_box(
    ab: &HilbertProof,
    bc: &HilbertProof,
) -> Result<HilbertProof, ProofError> {
    let logic = same_logic(ab, bc)?;
    let (k, a, b) = boxed_implication(ab)?;
    let (k2, b2, c) = boxed_implication(bc)?;
    if k != k2 {
        return Err(ProofError::Combine(format!(
            "modalities differ: [{k}] vs [{k2}]"
        )));
    }
    if b != b2 {
        return Err(ProofError::Combine(format!(
            "middle formulas differ: {b} vs {b2}"
        )));
    }
    let mut builder = ProofBuilder::new(logic).with_discipline(ab.discipline);
    let first = builder.append_shifted(ab);
    let second = builder.append_shifted(bc);
    let t = builder.taut(Formula::implies(
        Formula::implies(a.clone(), b.clone()),
        Formula::implies(
            Formula::implies(b, c.clone()),
            Formula::implies(a.clone(), c.clone()),
        ),
    ));
    let lifted = builder.box_mono(k, t);
    let step = builder.mp(lifted, first);
    let inner = builder.box_mono_implication(k, step);
    builder.mp(inner, second);
    builder.finish(Formula::bx(k, Formula::implies(a, c)))
}

/// From proofs of [k]A and [k]B, produces a proof of [k](A∧B).
pub fn conj_intro_under_box(
    pa: &HilbertProof,
    pb: &HilbertProof,
) -> Result<HilbertProof, ProofError> {
    let logic = same_logic(pa, pb)?;
    let unbox = |pr: &HilbertProof| match pr.conclusion.box_normal() {
        Formula::Box(k, body) => Ok((k, (*body).clone())),
        other => Err(ProofError::Combine(format!("conclusion {other} is not boxed"))),
    };
    let (k, a) = unbox(pa)?;
    let (k2, b) = unbox(pb)?;
    if k != k2 {
        return Err(ProofError::Combine(format!(
            "modalities differ: [{k}] vs [{k2}]"
        )));
    }
    let mut builder = ProofBuilder::new(logic).with_discipline(pa.discipline);
    let first = builder.append_shifted(pa);
    let second = builder.append_shifted(pb);
    let t = builder.taut(Formula::implies(
        a.clone(),
        Formula::implies(b.clone(), Formula::and(a.clone(), b.clone())),
    ));
    let lifted = builder.box_mono(k, t);
    let halfway = builder.mp(lifted, first);
    let inner = builder.box_mono_implication(k, halfway);
    builder.mp(inner, second);
    builder.finish(Formula::bx(k, Formula::and(a, b)))
}

/// From proofs of [k](A→B) and [k]A, produces a proof of [k]B.
pub fn k_distribute(
    k: u32,
    implication: &HilbertProof,
    antecedent: &HilbertProof,
) -> Result<HilbertProof, ProofError> {
    let logic = same_logic(implication, antecedent)?;
    let (ki, a, b) = boxed_implication(implication)?;
    if ki != k {
        return Err(ProofError::Combine(format!(
            "implication is under [{ki}], not [{k}]"
        )));
    }
    match antecedent.conclusion.box_normal() {
        Formula::Box(ka, body) if ka == k && *body == a => {}
        other => {
            return Err(ProofError::Combine(format!(
                "antecedent conclusion {other} is not [{k}]{a}"
            )))
        }
    }
    let mut builder = ProofBuilder::new(logic).with_discipline(implication.discipline);
    let first = builder.append_shifted(implication);
    let second = builder.append_shifted(antecedent);
    let spelled = builder.respell(first, Formula::bx(k, Formula::implies(a, b.clone())));
    let inner = builder.box_mono_implication(k, spelled);
    builder.mp(inner, second);
    builder.finish(Formula::bx(k, b))
}

/// Emits the derivation of [n]([0]q→q) into `builder` and returns the
/// index of its final line. Requires n ≥ 1 and works in GL/GLP logics
/// whose modality count exceeds n.
///
/// The argument splits on [0]q. If [0]q holds, monotonicity gives [n]q,
/// and q→([0]q→q) lifts it under [n]. If ¬[0]q holds, then ⟨0⟩¬q holds
/// (modulo the double negation inside the box), the negative
/// introspection schema gives [n]⟨0⟩¬q, and ⟨0⟩¬q→([0]q→q) lifts under
/// [n] the same way.
fn lemma_one_lines(builder: &mut ProofBuilder, n: u32, q: &Formula) -> usize {
    let box0q = Formula::bx(0, q.clone());
    let refl = Formula::implies(box0q.clone(), q.clone());
    let target = Formula::bx(n, refl.clone());

    // If [0]q then [n]q, and q entails [0]q→q.
    let mono = builder.line(
        Formula::implies(box0q.clone(), Formula::bx(n, q.clone())),
        Justification::Axmono { m: 0, n },
    );
    let weaken = builder.taut(Formula::implies(q.clone(), refl.clone()));
    let lifted = builder.box_mono(n, weaken);
    let from_box = builder.syllogism(mono, lifted);

    // If ¬[0]q then ¬[0]¬¬q, hence [n]¬[0]¬¬q by negative introspection,
    // and ¬[0]¬¬q entails [0]q→q (it contradicts [0]q).
    let nnq = Formula::not(Formula::not(q.clone()));
    let dia = Formula::not(Formula::bx(0, nnq.clone()));
    let collapse = builder.taut(Formula::implies(nnq.clone(), q.clone()));
    let collapse_boxed = builder.box_mono(0, collapse);
    let to_dia = builder.contrapose(collapse_boxed);
    let introspect = builder.line(
        Formula::implies(dia.clone(), Formula::bx(n, dia.clone())),
        Justification::Axnegintro { m: 0, n },
    );
    let expand = builder.taut(Formula::implies(q.clone(), nnq));
    let expand_boxed = builder.box_mono(0, expand);
    let from_dia = builder.contrapose(expand_boxed);
    let discharge = builder.taut(Formula::implies(Formula::not(box0q.clone()), refl));
    let dia_refl = builder.syllogism(from_dia, discharge);
    let dia_refl_boxed = builder.box_mono(n, dia_refl);
    let reach_dia = builder.syllogism(to_dia, introspect);
    let from_not_box = builder.syllogism(reach_dia, dia_refl_boxed);

    // Either way the target follows.
    let split = builder.taut(Formula::implies(
        Formula::implies(box0q.clone(), target.clone()),
        Formula::implies(
            Formula::implies(Formula::not(box0q), target.clone()),
            target,
        ),
    ));
    let step = builder.mp(split, from_box);
    builder.mp(step, from_not_box)
}

/// Builds a checked GLP-proof of [n]([0]p1→p1) for n ≥ 1. The proof's
/// logic is GLP with n+1 modalities, the least count in which [n] exists.
pub fn build_lemma_one_proof(n_target: u32) -> Result<HilbertProof, ProofError> {
    if n_target == 0 {
        return Err(ProofError::Precondition(
            "the boxed reflection lemma needs a modality index of at least 1".into(),
        ));
    }
    let q = Formula::var(1);
    let mut builder = ProofBuilder::new(LogicId::Glp(n_target + 1));
    lemma_one_lines(&mut builder, n_target, &q);
    builder.finish(Formula::bx(
        n_target,
        Formula::implies(Formula::bx(0, q.clone()), q),
    ))
}

/// The k-th formula of the chain p, p∨[0]p, p∨[0](p∨[0]p), … over the
/// variable `p` (k ≥ 1).
fn chain_formula(k: u32, p: &Formula) -> Formula {
    let mut f = p.clone();
    for _ in 1..k {
        f = Formula::or(p.clone(), Formula::bx(0, f));
    }
    f
}

/// Builds a checked GLP-proof of [1](Q_k(p0)→p0), where Q_1 = p0 and
/// Q_{i+1} = p0 ∨ [0]Q_i, for k ≥ 1.
///
/// Induction on k: the base is the necessitated tautology p0→p0; the
/// step chains the boxed reflection lemma [1]([0]Q_i→Q_i) with the
/// induction hypothesis [1](Q_i→p0) by syllogism under [1], then weakens
/// the antecedent [0]Q_i to p0∨[0]Q_i.
pub fn build_box_refl_chain_proof(k: u32) -> Result<HilbertProof, ProofError> {
    if k == 0 {
        return Err(ProofError::Precondition(
            "the unifier chain starts at index 1".into(),
        ));
    }
    let logic = LogicId::Glp(2);
    let p = Formula::var(0);

    let mut base = ProofBuilder::new(logic);
    let t = base.taut(Formula::implies(p.clone(), p.clone()));
    base.nec(1, t);
    let mut proof = base.finish(Formula::bx(1, Formula::implies(p.clone(), p.clone())))?;

    for i in 1..k {
        let q = chain_formula(i, &p);

        let mut lemma = ProofBuilder::new(logic);
        lemma_one_lines(&mut lemma, 1, &q);
        let lemma = lemma.finish(Formula::bx(
            1,
            Formula::implies(Formula::bx(0, q.clone()), q.clone()),
        ))?;

        // [1]([0]Q_i → Q_i) and [1](Q_i → p) give [1]([0]Q_i → p).
        let chained = syllogism_under_box(&lemma, &proof)?;

        let stronger = Formula::implies(Formula::bx(0, q.clone()), p.clone());
        let next = Formula::implies(chain_formula(i + 1, &p), p.clone());
        let mut step = ProofBuilder::new(logic);
        let carried = step.append_shifted(&chained);
        let weaken = step.taut(Formula::implies(stronger, next.clone()));
        let lifted = step.box_mono(1, weaken);
        step.mp(lifted, carried);
        proof = step.finish(Formula::bx(1, next))?;
    }
    Ok(proof)
}
