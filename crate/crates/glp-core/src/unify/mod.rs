//! Unifier checking and search.
//!
//! A substitution σ unifies φ in a logic L when L ⊢ σ(φ). For GLP the
//! formula [1]p has no most general unifier, but it does have an
//! infinite ascending family of them built from the Q-chains defined
//! here, so the module exposes those families, generality comparison
//! with explicit witnesses, rank searches along the chains, and a
//! three-valued ground-unifiability test.

use crate::engine::{decide, decide_glp, EngineConfig, EngineError, Verdict};
use crate::syntax::{Formula, LogicId, Substitution};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use thiserror::Error;

mod ground;

use ground::{one_point_value, ClosedPool};

/// The three formula families over one variable p used to describe the
/// unifiers of [1]p:
///
/// * `Q`: Q_1 = p and Q_{i+1} = p ∨ [0]Q_i;
/// * `QBig`: Qⁿ = the conjunction of [0]Q_i → Q_i for i = 1..n;
/// * `QStar`: Q*_1 = p and Q*_{i+1} = p ∧ ⟨0⟩Q*_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QKind {
    Q,
    QBig,
    QStar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QFamily {
    pub kind: QKind,
    pub index: u32,
    pub variable: u32,
}

impl QFamily {
    pub fn new(kind: QKind, index: u32) -> Self {
        QFamily {
            kind,
            index,
            variable: 0,
        }
    }

    pub fn with_variable(mut self, variable: u32) -> Self {
        self.variable = variable;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("Q-family indices start at 1")]
    ZeroIndex,
    #[error("chain comparison needs 1 <= i <= j, got i={i}, j={j}")]
    BadChainIndices { i: u32, j: u32 },
    #[error("rank searches need a bound of at least 1")]
    ZeroBound,
    #[error("hypothesis {hypothesis} has a countermodel, so the rank search does not apply")]
    HypothesisNotEstablished { hypothesis: Formula },
    #[error("expected validity {formula} was refuted by a countermodel")]
    RefutedEquivalence { formula: Formula },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Q_index instantiated at `base` in place of the variable.
fn q_chain_at(index: u32, base: &Formula) -> Formula {
    let mut f = base.clone();
    for _ in 1..index {
        f = Formula::or(base.clone(), Formula::bx(0, f));
    }
    f
}

/// Q*_index instantiated at `base`.
fn q_star_at(index: u32, base: &Formula) -> Formula {
    let mut f = base.clone();
    for _ in 1..index {
        f = Formula::and(base.clone(), Formula::dia(0, f));
    }
    f
}

/// Q^index instantiated at `base`.
fn q_big_at(index: u32, base: &Formula) -> Formula {
    Formula::conj((1..=index).map(|i| {
        let q = q_chain_at(i, base);
        Formula::implies(Formula::bx(0, q.clone()), q)
    }))
}

/// The formula named by a Q-family member.
pub fn q_formula(fam: &QFamily) -> Result<Formula, UnifyError> {
    if fam.index == 0 {
        return Err(UnifyError::ZeroIndex);
    }
    let base = Formula::var(fam.variable);
    Ok(match fam.kind {
        QKind::Q => q_chain_at(fam.index, &base),
        QKind::QBig => q_big_at(fam.index, &base),
        QKind::QStar => q_star_at(fam.index, &base),
    })
}

/// Decides whether σ unifies φ in the logic: the verdict for σ(φ).
/// `NoCountermodelWithinCap` means σ is a unifier as far as the bounded
/// search can tell.
pub fn is_unifier(
    sigma: &Substitution,
    f: &Formula,
    logic: LogicId,
    cfg: &EngineConfig,
) -> Result<Verdict, EngineError> {
    decide(logic, &sigma.apply(f), cfg)
}

/// One equivalence check per variable: τ(p) against θ(σ(p)).
#[derive(Debug, Clone)]
pub struct GeneralityReport {
    pub checks: Vec<(u32, Formula, Verdict)>,
}

impl GeneralityReport {
    /// True when every per-variable equivalence survived the search, so
    /// θ witnesses τ ≤ σ.
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|(_, _, v)| !v.is_invalid())
    }

    pub fn first_failure(&self) -> Option<(u32, &Formula, &Verdict)> {
        self.checks
            .iter()
            .find(|(_, _, v)| v.is_invalid())
            .map(|(var, f, v)| (*var, f, v))
    }
}

/// Tests whether θ witnesses τ ≤ σ over the given variables: for each
/// p there, decides GLP ⊢ τ(p) ↔ θ(σ(p)).
pub fn check_generality<I: IntoIterator<Item = u32>>(
    tau: &Substitution,
    sigma: &Substitution,
    theta: &Substitution,
    vars: I,
    cfg: &EngineConfig,
) -> Result<GeneralityReport, EngineError> {
    let mut checks = Vec::new();
    for var in vars {
        let equivalence = Formula::iff(tau.image(var), theta.apply(&sigma.image(var)));
        let verdict = decide_glp(&equivalence, cfg)?;
        checks.push((var, equivalence, verdict));
    }
    Ok(GeneralityReport { checks })
}

/// Produces the witness θ = {p0 ↦ Qⁱ(p0)} for Qⁱ ≤ Qʲ on the big-Q
/// family and confirms it by deciding GLP ⊢ Qⁱ(p0) ↔ Qʲ(Qⁱ(p0)). A
/// countermodel would contradict the chain ordering, so it is surfaced
/// as an error rather than a false return.
pub fn q_chain_witness(
    i: u32,
    j: u32,
    cfg: &EngineConfig,
) -> Result<(Substitution, bool), UnifyError> {
    if i == 0 || i > j {
        return Err(UnifyError::BadChainIndices { i, j });
    }
    let p = Formula::var(0);
    let theta = Substitution::single(0, q_big_at(i, &p));
    let equivalence = Formula::iff(q_big_at(i, &p), theta.apply(&q_big_at(j, &p)));
    let verdict = decide_glp(&equivalence, cfg)?;
    if verdict.is_invalid() {
        return Err(UnifyError::RefutedEquivalence {
            formula: equivalence,
        });
    }
    Ok((theta, true))
}

/// Least k ≤ k_max with GLP ⊢ Q_k(φ), or None. Such a k exists for some
/// bound exactly when GLP ⊢ [1]φ.
pub fn least_reflection_rank(
    f: &Formula,
    k_max: u32,
    cfg: &EngineConfig,
) -> Result<Option<u32>, UnifyError> {
    if k_max == 0 {
        return Err(UnifyError::ZeroBound);
    }
    for k in 1..=k_max {
        if !decide_glp(&q_chain_at(k, f), cfg)?.is_invalid() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Least k ≤ k_max with GLP ⊢ Q*_k(φ) → ⟨0⟩ψ, or None if the bound runs
/// out (some k always exists, but no bound on it is known). Requires the
/// hypothesis GLP ⊢ ⟨1⟩φ → ⟨0⟩ψ, which is what guarantees existence.
pub fn reduction_rank(
    f: &Formula,
    psi: &Formula,
    k_max: u32,
    cfg: &EngineConfig,
) -> Result<Option<u32>, UnifyError> {
    if k_max == 0 {
        return Err(UnifyError::ZeroBound);
    }
    let target = Formula::dia(0, psi.clone());
    let hypothesis = Formula::implies(Formula::dia(1, f.clone()), target.clone());
    if decide_glp(&hypothesis, cfg)?.is_invalid() {
        return Err(UnifyError::HypothesisNotEstablished { hypothesis });
    }
    for k in 1..=k_max {
        let candidate = Formula::implies(q_star_at(k, f), target.clone());
        if !decide_glp(&candidate, cfg)?.is_invalid() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Decides whether φ follows from GLP extended by all instances of the
/// reflection schema [0]q → q (instances only, no necessitation on
/// them), which holds exactly when GLP ⊢ [1]φ.
pub fn reflection_extension_proves(
    f: &Formula,
    cfg: &EngineConfig,
) -> Result<Verdict, EngineError> {
    decide_glp(&Formula::bx(1, f.clone()), cfg)
}

/// Outcome of the ground-unifier search. `NotUnifiable` names the closed
/// implication whose validity rules every ground unifier out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnifiabilityAnswer {
    Unifiable { substitution: Substitution },
    NotUnifiable { refutation: Formula },
    Unknown { candidates_tried: usize },
}

impl Serialize for UnifiabilityAnswer {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            UnifiabilityAnswer::Unifiable { substitution } => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("answer", "unifiable")?;
                let bindings: BTreeMap<String, String> = substitution
                    .bindings()
                    .map(|(v, f)| (format!("p{v}"), f.to_string()))
                    .collect();
                map.serialize_entry("substitution", &bindings)?;
                map.end()
            }
            UnifiabilityAnswer::NotUnifiable { refutation } => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("answer", "not-unifiable")?;
                map.serialize_entry("refutation", &refutation.to_string())?;
                map.end()
            }
            UnifiabilityAnswer::Unknown { candidates_tried } => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("answer", "unknown")?;
                map.serialize_entry("candidates_tried", candidates_tried)?;
                map.end()
            }
        }
    }
}

/// Cap on enumerated candidate substitutions; past it the search gives
/// up with `Unknown` instead of burning unbounded engine time.
const CANDIDATE_CAP: usize = 20_000;

/// Searches for a variable-free unifier of φ in GLP. If one exists at
/// all, one exists with closed values, so candidates range over closed
/// formulas up to `size_bound` AST nodes per variable, in canonical
/// order (least witness first).
///
/// The sound negative test runs before the enumeration: when
/// GLP ⊢ ⟨n⟩⊤ → ¬[0]φ (n the largest modality of φ, 0 if none), no
/// substitution can work, because applying one and necessitating would
/// make GLP derive [n]⊥. Everything else that fails both the search and
/// the test is reported `Unknown`.
pub fn search_ground_unifier(
    f: &Formula,
    size_bound: usize,
    cfg: &EngineConfig,
) -> Result<UnifiabilityAnswer, EngineError> {
    let n_test = f.box_normal().max_modality().unwrap_or(0);
    let refutation = Formula::implies(
        Formula::dia(n_test, Formula::Top),
        Formula::not(Formula::bx(0, f.clone())),
    );
    if !decide_glp(&refutation, cfg)?.is_invalid() {
        return Ok(UnifiabilityAnswer::NotUnifiable { refutation });
    }

    let vars: Vec<u32> = f.vars().into_iter().collect();
    if vars.is_empty() {
        if !decide_glp(f, cfg)?.is_invalid() {
            return Ok(UnifiabilityAnswer::Unifiable {
                substitution: Substitution::identity(),
            });
        }
        return Ok(UnifiabilityAnswer::Unknown { candidates_tried: 1 });
    }

    let modality_count = f.box_normal().max_modality().map_or(0, |m| m + 1);
    let mut search = GroundSearch {
        query: f,
        vars: &vars,
        size_bound: size_bound.max(1),
        pool: ClosedPool::new(modality_count),
        cfg,
        tried: 0,
        capped: false,
        assignment: Vec::with_capacity(vars.len()),
    };
    for total in vars.len()..=vars.len() * search.size_bound {
        if let Some(substitution) = search.level(total)? {
            return Ok(UnifiabilityAnswer::Unifiable { substitution });
        }
        if search.capped {
            break;
        }
    }
    Ok(UnifiabilityAnswer::Unknown {
        candidates_tried: search.tried,
    })
}

struct GroundSearch<'a> {
    query: &'a Formula,
    vars: &'a [u32],
    size_bound: usize,
    pool: ClosedPool,
    cfg: &'a EngineConfig,
    tried: usize,
    capped: bool,
    assignment: Vec<Formula>,
}

impl GroundSearch<'_> {
    /// Tries every assignment whose value sizes sum to exactly `total`.
    fn level(&mut self, total: usize) -> Result<Option<Substitution>, EngineError> {
        self.extend(0, total)
    }

    fn extend(&mut self, pos: usize, remaining: usize) -> Result<Option<Substitution>, EngineError> {
        let slots_after = self.vars.len() - pos - 1;
        let max_here = remaining
            .saturating_sub(slots_after)
            .min(self.size_bound);
        let min_here = remaining.saturating_sub(slots_after * self.size_bound).max(1);
        for size in min_here..=max_here {
            let count = self.pool.ensure(size);
            for idx in 0..count {
                if self.capped {
                    return Ok(None);
                }
                let candidate = self.pool.get(size, idx).clone();
                self.assignment.push(candidate);
                let found = if slots_after == 0 {
                    self.check_assignment()?
                } else {
                    self.extend(pos + 1, remaining - size)?
                };
                self.assignment.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
        }
        Ok(None)
    }

    fn check_assignment(&mut self) -> Result<Option<Substitution>, EngineError> {
        self.tried += 1;
        if self.tried >= CANDIDATE_CAP {
            self.capped = true;
        }
        // A unified query must hold in the edgeless one-world model, so
        // evaluate there first and skip the engine when it already fails.
        let empty = BTreeMap::new();
        let point: BTreeMap<u32, bool> = self
            .vars
            .iter()
            .zip(&self.assignment)
            .map(|(v, f)| (*v, one_point_value(f, &empty)))
            .collect();
        if !one_point_value(self.query, &point) {
            return Ok(None);
        }
        let mut sigma = Substitution::identity();
        for (v, f) in self.vars.iter().zip(&self.assignment) {
            sigma.bind(*v, f.clone());
        }
        if decide_glp(&sigma.apply(self.query), self.cfg)?.is_invalid() {
            return Ok(None);
        }
        Ok(Some(sigma))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::build_box_refl_chain_proof;
    use crate::syntax::parse;

    fn p(text: &str) -> Formula {
        parse(text, 4).unwrap()
    }

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn q_formula_examples() {
        let q2 = q_formula(&QFamily::new(QKind::Q, 2)).unwrap();
        assert_eq!(q2, p("p0 | [0]p0"));

        let big2 = q_formula(&QFamily::new(QKind::QBig, 2)).unwrap();
        assert_eq!(
            big2,
            p("([0]p0 -> p0) & ([0](p0 | [0]p0) -> (p0 | [0]p0))")
        );

        let star2 = q_formula(&QFamily::new(QKind::QStar, 2)).unwrap();
        assert_eq!(star2, p("p0 & <0>p0"));

        let other_var = q_formula(&QFamily::new(QKind::Q, 2).with_variable(3)).unwrap();
        assert_eq!(other_var, p("p3 | [0]p3"));

        assert_eq!(
            q_formula(&QFamily::new(QKind::Q, 0)),
            Err(UnifyError::ZeroIndex)
        );
    }

    #[test]
    fn unifier_checks_on_box_one_p() {
        let f = p("[1]p0");
        let reflection = Substitution::single(0, p("[0]p0 -> p0"));
        assert!(!is_unifier(&reflection, &f, LogicId::Glp(2), &cfg())
            .unwrap()
            .is_invalid());

        for k in 1..=3u32 {
            let mut image = Formula::Top;
            for _ in 0..k {
                image = Formula::dia(0, image);
            }
            let sigma = Substitution::single(0, image);
            assert!(
                !is_unifier(&sigma, &f, LogicId::Glp(2), &cfg())
                    .unwrap()
                    .is_invalid(),
                "diamond tower of height {k}"
            );
        }

        let bad = Substitution::single(0, p("[0]F"));
        let verdict = is_unifier(&bad, &f, LogicId::Glp(2), &cfg()).unwrap();
        let model = verdict.countermodel().expect("countermodel");
        assert_eq!(model.worlds().len(), 3);
    }

    #[test]
    fn big_q_family_unifies_box_one_p() {
        let f = p("[1]p0");
        for k in 1..=3u32 {
            let sigma = Substitution::single(
                0,
                q_formula(&QFamily::new(QKind::QBig, k)).unwrap(),
            );
            assert!(
                !is_unifier(&sigma, &f, LogicId::Glp(2), &cfg())
                    .unwrap()
                    .is_invalid(),
                "Q^{k}"
            );
        }
    }

    #[test]
    fn chain_conclusions_match_engine_and_proofs() {
        for k in 1..=3u32 {
            let proof = build_box_refl_chain_proof(k).unwrap();
            assert!(
                !decide_glp(&proof.conclusion, &cfg()).unwrap().is_invalid(),
                "k = {k}"
            );
        }
    }

    #[test]
    fn big_q_equals_chain_implication() {
        for n in 1..=2u32 {
            let lhs = q_formula(&QFamily::new(QKind::QBig, n)).unwrap();
            let rhs = Formula::implies(
                q_formula(&QFamily::new(QKind::Q, n + 1)).unwrap(),
                Formula::var(0),
            );
            assert!(
                !decide_glp(&Formula::iff(lhs, rhs), &cfg()).unwrap().is_invalid(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn reflection_instances_do_not_prove_two_diamonds() {
        for text in ["p0", "F", "[0]p0", "<0>T"] {
            let psi = p(text);
            let hypothesis =
                Formula::implies(Formula::bx(0, psi.clone()), psi.clone());
            let query = Formula::implies(hypothesis, p("<0><0>T"));
            let verdict = decide_glp(&query, &cfg()).unwrap();
            assert!(verdict.is_invalid(), "{text}");
        }
    }

    #[test]
    fn generality_examples() {
        let tau = Substitution::single(0, p("<0>T"));
        let sigma = Substitution::single(0, p("[0]p0 -> p0"));
        let theta = Substitution::single(0, Formula::Bot);
        let report = check_generality(&tau, &sigma, &theta, [0], &cfg()).unwrap();
        assert!(report.holds());
        assert!(report.first_failure().is_none());

        let reflexive =
            check_generality(&sigma, &sigma, &Substitution::identity(), [0], &cfg()).unwrap();
        assert!(reflexive.holds());

        let top = Substitution::single(0, Formula::Top);
        let bot = Substitution::single(0, Formula::Bot);
        let id_witness = Substitution::single(0, Formula::var(0));
        let failing = check_generality(&top, &bot, &id_witness, [0], &cfg()).unwrap();
        assert!(!failing.holds());
        assert_eq!(failing.first_failure().unwrap().0, 0);
    }

    #[test]
    fn generality_composes_transitively() {
        // τ ≤ σ via θ1 and σ ≤ id via θ2 = σ, so τ ≤ id via θ1 ∘ θ2.
        let tau = Substitution::single(0, p("<0>T"));
        let sigma = Substitution::single(0, p("[0]p0 -> p0"));
        let theta1 = Substitution::single(0, Formula::Bot);
        let id = Substitution::identity();
        assert!(check_generality(&tau, &sigma, &theta1, [0], &cfg())
            .unwrap()
            .holds());
        assert!(check_generality(&sigma, &id, &sigma, [0], &cfg())
            .unwrap()
            .holds());
        let composed = Substitution::compose(&theta1, &sigma);
        assert!(check_generality(&tau, &id, &composed, [0], &cfg())
            .unwrap()
            .holds());
    }

    #[test]
    fn chain_witnesses_verify() {
        for (i, j) in [(1, 1), (1, 2), (2, 3)] {
            let (theta, verified) = q_chain_witness(i, j, &cfg()).unwrap();
            assert!(verified, "({i},{j})");
            assert_eq!(
                theta.image(0),
                q_formula(&QFamily::new(QKind::QBig, i)).unwrap()
            );
        }
        assert_eq!(
            q_chain_witness(2, 1, &cfg()),
            Err(UnifyError::BadChainIndices { i: 2, j: 1 })
        );
        assert_eq!(
            q_chain_witness(0, 1, &cfg()),
            Err(UnifyError::BadChainIndices { i: 0, j: 1 })
        );
    }

    #[test]
    fn reflection_rank_examples() {
        assert_eq!(
            least_reflection_rank(&p("[0]p1 -> p1"), 4, &cfg()).unwrap(),
            Some(2)
        );
        assert_eq!(
            least_reflection_rank(&Formula::Top, 4, &cfg()).unwrap(),
            Some(1)
        );
        assert_eq!(least_reflection_rank(&Formula::Bot, 3, &cfg()).unwrap(), None);
        assert_eq!(
            least_reflection_rank(&Formula::Top, 0, &cfg()),
            Err(UnifyError::ZeroBound)
        );
    }

    #[test]
    fn reduction_rank_examples() {
        assert_eq!(
            reduction_rank(&Formula::Top, &Formula::Top, 4, &cfg()).unwrap(),
            Some(2)
        );
        assert_eq!(
            reduction_rank(&p("<0>T"), &Formula::Top, 4, &cfg()).unwrap(),
            Some(1)
        );
        match reduction_rank(&Formula::Top, &Formula::var(0), 4, &cfg()) {
            Err(UnifyError::HypothesisNotEstablished { hypothesis }) => {
                assert_eq!(hypothesis, p("<1>T -> <0>p0"));
            }
            other => panic!("expected a hypothesis error, got {other:?}"),
        }
    }

    #[test]
    fn reflection_extension_examples() {
        assert!(!reflection_extension_proves(&p("[0]p1 -> p1"), &cfg())
            .unwrap()
            .is_invalid());
        assert!(!reflection_extension_proves(&p("<0>T"), &cfg())
            .unwrap()
            .is_invalid());
        assert!(reflection_extension_proves(&Formula::Bot, &cfg())
            .unwrap()
            .is_invalid());
    }

    #[test]
    fn ground_search_examples() {
        match search_ground_unifier(&p("[1]p0"), 7, &cfg()).unwrap() {
            UnifiabilityAnswer::Unifiable { substitution } => {
                assert_eq!(substitution.image(0), Formula::Top);
            }
            other => panic!("expected a unifier, got {other:?}"),
        }

        match search_ground_unifier(&p("p0 & ~p0"), 3, &cfg()).unwrap() {
            UnifiabilityAnswer::NotUnifiable { refutation } => {
                assert_eq!(refutation, p("<0>T -> ~[0](p0 & ~p0)"));
            }
            other => panic!("expected not-unifiable, got {other:?}"),
        }

        match search_ground_unifier(&p("p0"), 7, &cfg()).unwrap() {
            UnifiabilityAnswer::Unifiable { substitution } => {
                assert_eq!(substitution.image(0), Formula::Top);
            }
            other => panic!("expected a unifier, got {other:?}"),
        }
    }

    #[test]
    fn ground_search_handles_closed_queries_and_bounds() {
        // ⟨0⟩⊤ is closed and underivable, and the negative test sees it:
        // every finite chain has a last world, so ⟨0⟩⊤ → ¬[0]⟨0⟩⊤ holds.
        match search_ground_unifier(&p("<0>T"), 3, &cfg()).unwrap() {
            UnifiabilityAnswer::NotUnifiable { refutation } => {
                assert_eq!(refutation, p("<0>T -> ~[0]<0>T"));
            }
            other => panic!("expected not-unifiable, got {other:?}"),
        }

        // [0]⊥ is closed and underivable, but the negative test misses it
        // (its antecedent only mentions modality 0), leaving a gap.
        match search_ground_unifier(&p("[0]F"), 3, &cfg()).unwrap() {
            UnifiabilityAnswer::Unknown { candidates_tried } => {
                assert_eq!(candidates_tried, 1);
            }
            other => panic!("expected unknown, got {other:?}"),
        }

        match search_ground_unifier(&p("[1]T"), 3, &cfg()).unwrap() {
            UnifiabilityAnswer::Unifiable { substitution } => {
                assert!(substitution.is_identity());
            }
            other => panic!("expected the empty substitution, got {other:?}"),
        }
    }

    #[test]
    fn unifiability_answer_json_shapes() {
        let unifiable = UnifiabilityAnswer::Unifiable {
            substitution: Substitution::single(0, Formula::Top),
        };
        assert_eq!(
            serde_json::to_string(&unifiable).unwrap(),
            r#"{"answer":"unifiable","substitution":{"p0":"T"}}"#
        );

        let not_unifiable = UnifiabilityAnswer::NotUnifiable {
            refutation: p("<0>T -> ~[0]F"),
        };
        assert_eq!(
            serde_json::to_string(&not_unifiable).unwrap(),
            r#"{"answer":"not-unifiable","refutation":"<0>T -> ~[0]F"}"#
        );

        let unknown = UnifiabilityAnswer::Unknown { candidates_tried: 9 };
        assert_eq!(
            serde_json::to_string(&unknown).unwrap(),
            r#"{"answer":"unknown","candidates_tried":9}"#
        );
    }
}
