//! Derivability decisions with countermodel certificates.
//!
//! Only J gets a direct model search. The other logics reduce to it:
//! GLP-derivability of φ is J-derivability of M⁺(φ)→φ, and
//! GLPS-derivability of φ is GLP-derivability of H(φ)→φ. The search is
//! complete per world-count cap, so a negative answer is reported as
//! `NoCountermodelWithinCap` rather than an unbounded validity claim.

use crate::semantics::KripkeModel;
use crate::syntax::{Formula, LogicId};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

mod search;

/// Tuning knobs for the countermodel search.
///
/// `max_worlds` caps certificate size (at most 16). `max_modality` bounds
/// the modality indices a query may mention. `node_budget` caps search
/// steps so pathological queries fail with a resource error instead of
/// hanging. `deterministic` is reserved for a parallel explorer; the
/// current search is deterministic either way.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub max_worlds: usize,
    pub max_modality: u32,
    pub deterministic: bool,
    pub node_budget: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_worlds: 8,
            max_modality: 4,
            deterministic: true,
            node_budget: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// A rooted J-countermodel of the query, refuted at `refuted_at`.
    /// Certificates are re-checked (frame conditions, rootedness, falsity
    /// of the query at the root) before being returned.
    Invalid {
        countermodel: KripkeModel,
        refuted_at: String,
    },
    /// No rooted J-countermodel with at most `cap` worlds exists. This is
    /// an exact bounded claim, not a validity claim.
    NoCountermodelWithinCap { cap: usize },
}

impl Verdict {
    pub fn is_invalid(&self) -> bool {
        matches!(self, Verdict::Invalid { .. })
    }

    pub fn countermodel(&self) -> Option<&KripkeModel> {
        match self {
            Verdict::Invalid { countermodel, .. } => Some(countermodel),
            Verdict::NoCountermodelWithinCap { .. } => None,
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Verdict::Invalid {
                countermodel,
                refuted_at,
            } => {
                let mut map = serializer.serialize_map(Some(3))?;
                map.serialize_entry("verdict", "invalid")?;
                map.serialize_entry("refuted_at", refuted_at)?;
                map.serialize_entry("countermodel", countermodel)?;
                map.end()
            }
            Verdict::NoCountermodelWithinCap { cap } => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("verdict", "no-countermodel")?;
                map.serialize_entry("cap", cap)?;
                map.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("bad engine configuration: {0}")]
    InvalidConfig(String),
    #[error("modality index {index} out of range (allowed below {allowed})")]
    ModalityOutOfRange { index: u32, allowed: u32 },
    #[error("closure of the query has {size} formulas (limit {limit})")]
    ClosureTooLarge { size: usize, limit: usize },
    #[error("query has {count} atoms to label worlds with (limit {limit})")]
    TooManyAtoms { count: usize, limit: usize },
    #[error("search budget exhausted; raise node_budget or simplify the query")]
    BudgetExhausted,
    #[error("deduction from premises is not supported in {0}")]
    UnsupportedLogic(LogicId),
    #[error("certificate failed re-checking: {0}")]
    CertificateCheck(String),
}

/// The monotonicity closure M(φ): the conjunction of [i]ψ→[j]ψ over all
/// boxed subformulas [i]ψ of φ (diamonds translated away first) and all
/// j with i < j ≤ n, where n is the largest modality in φ (0 if none).
/// An empty conjunction is ⊤.
pub fn m_formula(f: &Formula) -> Formula {
    let g = f.box_normal();
    let n = g.max_modality().unwrap_or(0);
    let mut conjuncts = Vec::new();
    for sub in g.subformulas() {
        if let Formula::Box(i, body) = &sub {
            for j in i + 1..=n {
                conjuncts.push(Formula::implies(sub.clone(), Formula::bx(j, (**body).clone())));
            }
        }
    }
    Formula::conj(conjuncts)
}

/// M⁺(φ) = M(φ) ∧ ⋀_{i≤n} [i]M(φ), with n as in `m_formula`.
pub fn m_plus(f: &Formula) -> Formula {
    let m = m_formula(f);
    let n = f.box_normal().max_modality().unwrap_or(0);
    let mut conjuncts = vec![m.clone()];
    for i in 0..=n {
        conjuncts.push(Formula::bx(i, m.clone()));
    }
    Formula::conj(conjuncts)
}

/// The reflection hypothesis H(φ): the conjunction of [k]ψ→ψ over all
/// boxed subformulas [k]ψ of φ (diamonds translated away first); ⊤ if
/// there are none.
pub fn h_formula(f: &Formula) -> Formula {
    let g = f.box_normal();
    let mut conjuncts = Vec::new();
    for sub in g.subformulas() {
        if let Formula::Box(_, body) = &sub {
            conjuncts.push(Formula::implies(sub.clone(), (**body).clone()));
        }
    }
    Formula::conj(conjuncts)
}

/// R(φ): the conjunction of [0]ψ→ψ over every subformula ψ of φ
/// (diamonds translated away first).
pub fn r_formula(f: &Formula) -> Formula {
    let g = f.box_normal();
    let conjuncts = g
        .subformulas()
        .into_iter()
        .map(|sub| Formula::implies(Formula::bx(0, sub.clone()), sub))
        .collect::<Vec<_>>();
    Formula::conj(conjuncts)
}

fn validate(f: &Formula, cfg: &EngineConfig) -> Result<(), EngineError> {
    if cfg.max_worlds == 0 || cfg.max_worlds > search::MAX_WORLDS {
        return Err(EngineError::InvalidConfig(format!(
            "max_worlds must be between 1 and {}, got {}",
            search::MAX_WORLDS,
            cfg.max_worlds
        )));
    }
    if let Err(index) = f.check_modalities(cfg.max_modality) {
        return Err(EngineError::ModalityOutOfRange {
            index,
            allowed: cfg.max_modality,
        });
    }
    Ok(())
}

/// Searches for a rooted J-countermodel of φ with at most
/// `cfg.max_worlds` worlds, smallest first. World labels range over the
/// closure of φ; the J-frame conditions are enforced by constraint
/// propagation while edges are added, so every completed model is a
/// J-model by construction (and re-checked anyway).
pub fn decide_j(f: &Formula, cfg: &EngineConfig) -> Result<Verdict, EngineError> {
    validate(f, cfg)?;
    search::decide(f, cfg)
}

/// GLP-derivability via the reduction to J: decides M⁺(φ)→φ, so an
/// Invalid certificate refutes M⁺(φ)→φ rather than φ alone.
pub fn decide_glp(f: &Formula, cfg: &EngineConfig) -> Result<Verdict, EngineError> {
    decide_j(&Formula::implies(m_plus(f), f.clone()), cfg)
}

/// GLPS-derivability via the reduction to GLP: decides H(φ)→φ.
pub fn decide_glps(f: &Formula, cfg: &EngineConfig) -> Result<Verdict, EngineError> {
    decide_glp(&Formula::implies(h_formula(f), f.clone()), cfg)
}

/// Dispatches on the logic, first checking φ against the logic's own
/// modality count (GL is the single-modality case of GLP).
pub fn decide(logic: LogicId, f: &Formula, cfg: &EngineConfig) -> Result<Verdict, EngineError> {
    if let Err(index) = f.check_modalities(logic.modality_count()) {
        return Err(EngineError::ModalityOutOfRange {
            index,
            allowed: logic.modality_count(),
        });
    }
    match logic {
        LogicId::J(_) => decide_j(f, cfg),
        LogicId::Gl | LogicId::Glp(_) => decide_glp(f, cfg),
        LogicId::Glps(_) => decide_glps(f, cfg),
    }
}

/// Decides Γ ⊢ φ with necessitation allowed on premises, encoded as
/// derivability of ⋀_{γ∈Γ}(γ ∧ [0]γ) → φ. The encoding is sound for GL
/// and GLP because [0]γ dominates every iterated modality there; J and
/// GLPS are rejected.
pub fn deduces(
    premises: &[Formula],
    f: &Formula,
    logic: LogicId,
    cfg: &EngineConfig,
) -> Result<Verdict, EngineError> {
    match logic {
        LogicId::Gl | LogicId::Glp(_) => {}
        other => return Err(EngineError::UnsupportedLogic(other)),
    }
    for premise in premises {
        if let Err(index) = premise.check_modalities(logic.modality_count()) {
            return Err(EngineError::ModalityOutOfRange {
                index,
                allowed: logic.modality_count(),
            });
        }
    }
    if let Err(index) = f.check_modalities(logic.modality_count()) {
        return Err(EngineError::ModalityOutOfRange {
            index,
            allowed: logic.modality_count(),
        });
    }
    let hyp = Formula::conj(
        premises
            .iter()
            .map(|g| Formula::and(g.clone(), Formula::bx(0, g.clone()))),
    );
    decide_glp(&Formula::implies(hyp, f.clone()), cfg)
}
