//! Hilbert-style proof objects and a checker for GL, J, and GLP.
//!
//! A proof is a sequence of lines, each carrying a formula and a
//! justification: a propositional tautology instance, an instance of one
//! of the modal axiom schemata, modus ponens, necessitation, or a
//! declared premise. Checking is purely syntactic: every formula is
//! normalized (diamonds rewritten as negated boxes) and then matched
//! structurally against its declared schema, so no unification or search
//! is involved. A checked proof is a validity certificate independent of
//! the countermodel engine.

use crate::syntax::{Formula, LogicId};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

mod scripts;

pub use scripts::{
    build_box_refl_chain_proof, build_lemma_one_proof, conj_intro_under_box, k_distribute,
    syllogism_under_box, ProofBuilder,
};

/// How necessitation may be used. Under `NoNecOnPremises`, a line that
/// depends on a premise (transitively through modus ponens or
/// necessitation) must not be necessitated; this is the discipline for
/// deductions where premises are assumptions, not theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NecDiscipline {
    #[default]
    Unrestricted,
    NoNecOnPremises,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum Justification {
    /// Propositional tautology with boxes abstracted as atoms.
    Taut,
    /// [n](A→B) → ([n]A→[n]B)
    Axk { n: u32 },
    /// [n]([n]A→A) → [n]A
    Axlob { n: u32 },
    /// ⟨m⟩A → [n]⟨m⟩A for m < n
    Axnegintro { m: u32, n: u32 },
    /// [m]A → [n]A for m ≤ n (GL/GLP only)
    Axmono { m: u32, n: u32 },
    /// [m]A → [n][m]A for m < n (J only)
    Axj6 { m: u32, n: u32 },
    /// [m]A → [m][n]A for m < n (J only)
    Axj7 { m: u32, n: u32 },
    /// From lines `implication` (A→B) and `antecedent` (A), conclude B.
    Mp { implication: usize, antecedent: usize },
    /// From line `line` (A), conclude [k]A.
    Nec { k: u32, line: usize },
    /// A declared assumption; `index` only labels which one.
    Premise { index: u32 },
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Taut => write!(f, "Taut"),
            Justification::Axk { n } => write!(f, "AxK({n})"),
            Justification::Axlob { n } => write!(f, "AxLob({n})"),
            Justification::Axnegintro { m, n } => write!(f, "AxNegIntro({m},{n})"),
            Justification::Axmono { m, n } => write!(f, "AxMono({m},{n})"),
            Justification::Axj6 { m, n } => write!(f, "AxJ6({m},{n})"),
            Justification::Axj7 { m, n } => write!(f, "AxJ7({m},{n})"),
            Justification::Mp {
                implication,
                antecedent,
            } => write!(f, "MP({implication},{antecedent})"),
            Justification::Nec { k, line } => write!(f, "Nec({k},{line})"),
            Justification::Premise { index } => write!(f, "Premise({index})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertProof {
    pub logic: LogicId,
    pub discipline: NecDiscipline,
    pub lines: Vec<ProofLine>,
    pub conclusion: Formula,
}

impl HilbertProof {
    /// Formulas of the `Premise` lines, in order of appearance.
    pub fn premises(&self) -> Vec<&Formula> {
        self.lines
            .iter()
            .filter(|l| matches!(l.justification, Justification::Premise { .. }))
            .map(|l| &l.formula)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("proof has no lines")]
    Empty,
    #[error("line {line} ({justification}): {reason}")]
    Line {
        line: usize,
        justification: String,
        reason: String,
    },
    #[error("conclusion does not match the final line")]
    ConclusionMismatch,
    #[error("proof checking supports GL, J, and GLP, not {0}")]
    UnsupportedLogic(LogicId),
    #[error("tautology check would need {count} abstracted atoms (limit {limit})")]
    TautologyTooWide { count: usize, limit: usize },
    #[error("cannot combine proofs: {0}")]
    Combine(String),
    #[error("{0}")]
    Precondition(String),
}

/// True iff the formula becomes a classical tautology once its maximal
/// boxed subformulas are abstracted as fresh atoms (checked by truth
/// table over at most `max_atoms` abstracted atoms, default 20).
pub fn is_tautology_instance(f: &Formula) -> Result<bool, ProofError> {
    is_tautology_instance_bounded(f, 20)
}

pub fn is_tautology_instance_bounded(f: &Formula, max_atoms: usize) -> Result<bool, ProofError> {
    fn collect<'a>(f: &'a Formula, atoms: &mut Vec<&'a Formula>) {
        match f {
            Formula::Var(_) | Formula::Box(..) => {
                if !atoms.contains(&f) {
                    atoms.push(f);
                }
            }
            Formula::Bot | Formula::Top => {}
            Formula::Not(a) => collect(a, atoms),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                collect(a, atoms);
                collect(b, atoms);
            }
            Formula::Dia(..) => unreachable!("normalized before collection"),
        }
    }

    fn eval(f: &Formula, ids: &HashMap<&Formula, usize>, row: u64) -> bool {
        match f {
            Formula::Var(_) | Formula::Box(..) => row >> ids[f] & 1 == 1,
            Formula::Bot => false,
            Formula::Top => true,
            Formula::Not(a) => !eval(a, ids, row),
            Formula::And(a, b) => eval(a, ids, row) && eval(b, ids, row),
            Formula::Or(a, b) => eval(a, ids, row) || eval(b, ids, row),
            Formula::Implies(a, b) => !eval(a, ids, row) || eval(b, ids, row),
            Formula::Iff(a, b) => eval(a, ids, row) == eval(b, ids, row),
            Formula::Dia(..) => unreachable!(),
        }
    }

    let g = f.box_normal();
    let mut atoms = Vec::new();
    collect(&g, &mut atoms);
    if atoms.len() > max_atoms {
        return Err(ProofError::TautologyTooWide {
            count: atoms.len(),
            limit: max_atoms,
        });
    }
    let ids: HashMap<&Formula, usize> = atoms.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    Ok((0..1u64 << atoms.len()).all(|row| eval(&g, &ids, row)))
}

fn as_implies(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Implies(a, b) => Some((a, b)),
        _ => None,
    }
}

fn as_box(f: &Formula) -> Option<(u32, &Formula)> {
    match f {
        Formula::Box(k, a) => Some((*k, a)),
        _ => None,
    }
}

/// Matches `f` against [n](A→B) → ([n]A→[n]B).
fn matches_k(f: &Formula, n: u32) -> bool {
    let Some((l, r)) = as_implies(f) else { return false };
    let Some((kn, ab)) = as_box(l) else { return false };
    let Some((a, b)) = as_implies(ab) else { return false };
    let Some((la, ra)) = as_implies(r) else { return false };
    kn == n
        && as_box(la) == Some((n, a))
        && as_box(ra) == Some((n, b))
}

/// Matches `f` against [n]([n]A→A) → [n]A.
fn matches_lob(f: &Formula, n: u32) -> bool {
    let Some((l, r)) = as_implies(f) else { return false };
    let Some((kn, body)) = as_box(l) else { return false };
    let Some((boxed, a)) = as_implies(body) else { return false };
    kn == n && as_box(boxed) == Some((n, a)) && as_box(r) == Some((n, a))
}

/// Matches `f` against ¬[m]¬A → [n]¬[m]¬A (the normalized ⟨m⟩A → [n]⟨m⟩A).
fn matches_neg_intro(f: &Formula, m: u32, n: u32) -> bool {
    let Some((l, r)) = as_implies(f) else { return false };
    let Formula::Not(inner) = l else { return false };
    let Some((km, negated)) = as_box(inner) else { return false };
    if km != m || !matches!(negated, Formula::Not(_)) {
        return false;
    }
    as_box(r) == Some((n, l))
}

/// Matches `f` against [m]A → [n]A.
fn matches_mono(f: &Formula, m: u32, n: u32) -> bool {
    let Some((l, r)) = as_implies(f) else { return false };
    match (as_box(l), as_box(r)) {
        (Some((km, a)), Some((kn, b))) => km == m && kn == n && a == b,
        _ => false,
    }
}

/// Matches `f` against [m]A → [n][m]A.
fn matches_j6(f: &Formula, m: u32, n: u32) -> bool {
    let Some((l, r)) = as_implies(f) else { return false };
    as_box(l).map(|(km, _)| km) == Some(m) && as_box(r) == Some((n, l))
}

/// Matches `f` against [m]A → [m][n]A.
fn matches_j7(f: &Formula, m: u32, n: u32) -> bool {
    let Some((l, r)) = as_implies(f) else { return false };
    let Some((km, a)) = as_box(l) else { return false };
    let Some((km2, inner)) = as_box(r) else { return false };
    km == m && km2 == m && as_box(inner) == Some((n, a))
}

/// Checks every line of the proof against its declared justification and
/// the conclusion against the final line. All comparisons are made on the
/// diamond-free normal forms, so ⟨m⟩A and ¬[m]¬A are interchangeable.
pub fn check_proof(proof: &HilbertProof) -> Result<(), ProofError> {
    let logic = proof.logic;
    if matches!(logic, LogicId::Glps(_)) {
        return Err(ProofError::UnsupportedLogic(logic));
    }
    if proof.lines.is_empty() {
        return Err(ProofError::Empty);
    }
    let count = logic.modality_count();
    let canon: Vec<Formula> = proof.lines.iter().map(|l| l.formula.box_normal()).collect();
    let mut depends = vec![false; proof.lines.len()];

    for (i, line) in proof.lines.iter().enumerate() {
        let fail = |reason: String| ProofError::Line {
            line: i,
            justification: line.justification.to_string(),
            reason,
        };
        if let Err(index) = line.formula.check_modalities(count) {
            return Err(fail(format!("modality {index} out of range for {logic}")));
        }
        let schema_ok = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(fail("formula is not an instance of this schema".into()))
            }
        };
        match line.justification {
            Justification::Taut => {
                let taut = is_tautology_instance(&line.formula).map_err(|e| fail(e.to_string()))?;
                schema_ok(taut)?;
            }
            Justification::Axk { n } => schema_ok(n < count && matches_k(&canon[i], n))?,
            Justification::Axlob { n } => schema_ok(n < count && matches_lob(&canon[i], n))?,
            Justification::Axnegintro { m, n } => {
                schema_ok(m < n && n < count && matches_neg_intro(&canon[i], m, n))?
            }
            Justification::Axmono { m, n } => {
                if !matches!(logic, LogicId::Gl | LogicId::Glp(_)) {
                    return Err(fail(format!("monotonicity is not an axiom of {logic}")));
                }
                schema_ok(m <= n && n < count && matches_mono(&canon[i], m, n))?;
            }
            Justification::Axj6 { m, n } => {
                if !matches!(logic, LogicId::J(_)) {
                    return Err(fail(format!("this schema belongs to J, not {logic}")));
                }
                schema_ok(m < n && n < count && matches_j6(&canon[i], m, n))?;
            }
            Justification::Axj7 { m, n } => {
                if !matches!(logic, LogicId::J(_)) {
                    return Err(fail(format!("this schema belongs to J, not {logic}")));
                }
                schema_ok(m < n && n < count && matches_j7(&canon[i], m, n))?;
            }
            Justification::Mp {
                implication,
                antecedent,
            } => {
                if implication >= i || antecedent >= i {
                    return Err(fail("referenced lines must precede this one".into()));
                }
                match as_implies(&canon[implication]) {
                    Some((a, b)) if *a == canon[antecedent] && *b == canon[i] => {}
                    Some(_) => {
                        return Err(fail(
                            "antecedent or consequent does not match the implication".into(),
                        ))
                    }
                    None => return Err(fail("first referenced line is not an implication".into())),
                }
                depends[i] = depends[implication] || depends[antecedent];
            }
            Justification::Nec { k, line: src } => {
                if src >= i {
                    return Err(fail("referenced line must precede this one".into()));
                }
                if k >= count {
                    return Err(fail(format!("modality {k} out of range for {logic}")));
                }
                if canon[i] != Formula::bx(k, canon[src].clone()) {
                    return Err(fail("formula is not the boxed source line".into()));
                }
                if proof.discipline == NecDiscipline::NoNecOnPremises && depends[src] {
                    return Err(fail(
                        "necessitation applied to a premise-dependent line".into(),
                    ));
                }
                depends[i] = depends[src];
            }
            Justification::Premise { .. } => depends[i] = true,
        }
    }
    if proof.conclusion.box_normal() != canon[proof.lines.len() - 1] {
        return Err(ProofError::ConclusionMismatch);
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct LineJson {
    formula: String,
    #[serde(flatten)]
    rule: Justification,
}

#[derive(Serialize, Deserialize)]
struct ProofJson {
    logic: String,
    #[serde(default)]
    discipline: NecDiscipline,
    conclusion: String,
    lines: Vec<LineJson>,
}

impl Serialize for HilbertProof {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ProofJson {
            logic: self.logic.to_string(),
            discipline: self.discipline,
            conclusion: self.conclusion.to_string(),
            lines: self
                .lines
                .iter()
                .map(|l| LineJson {
                    formula: l.formula.to_string(),
                    rule: l.justification,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HilbertProof {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pj = ProofJson::deserialize(deserializer)?;
        let logic: LogicId = pj.logic.parse().map_err(D::Error::custom)?;
        let count = logic.modality_count();
        let parse_formula = |text: &str| {
            crate::syntax::parse(text, count)
                .map_err(|e| D::Error::custom(format!("in {text:?}: {e}")))
        };
        let mut lines = Vec::with_capacity(pj.lines.len());
        for l in &pj.lines {
            lines.push(ProofLine {
                formula: parse_formula(&l.formula)?,
                justification: l.rule,
            });
        }
        Ok(HilbertProof {
            logic,
            discipline: pj.discipline,
            lines,
            conclusion: parse_formula(&pj.conclusion)?,
        })
    }
}
