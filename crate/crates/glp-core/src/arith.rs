//! Arithmetical unifiability and admissibility, reduced to modal
//! derivability.
//!
//! A realization maps each variable to an arithmetical sentence and each
//! [k] to a provability-strength operator; φ is arithmetically unifiable
//! when some realization makes it provable, and a rule is arithmetically
//! admissible when every realization unifying its premises also unifies
//! its conclusion. Both properties reduce to derivability questions that
//! the engine can decide: unifiability of φ fails exactly when
//! GLPS ⊢ ¬[0]φ, or equivalently when GLP ⊢ ⟨n⟩⊤ → ¬[0]φ with n the
//! number of modalities in φ's language, and admissibility of
//! φ₁,…,φₛ / φ holds exactly when GLPS ⊢ [0]φ₁ ∧ … ∧ [0]φₛ → [0]φ.

use crate::engine::{decide_glp, decide_glps, EngineConfig, EngineError, Verdict};
use crate::syntax::Formula;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceRule {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl InferenceRule {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Self {
        InferenceRule {
            premises,
            conclusion,
        }
    }
}

/// A yes/no answer together with the modal formula it was read off from
/// and the engine's verdict on that formula. A "no countermodel" verdict
/// is cap-bounded, and the answer inherits that qualification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithDecision {
    pub answer: bool,
    pub reduced: Formula,
    pub verdict: Verdict,
}

impl Serialize for ArithDecision {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("answer", &self.answer)?;
        map.serialize_entry("reduced", &self.reduced.to_string())?;
        map.serialize_entry("verdict", &self.verdict)?;
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error(
        "unifiability criteria disagree on {formula}: the GLP test says {via_glp}, \
         the GLPS test says {via_glps}"
    )]
    CriteriaDisagree {
        formula: Formula,
        via_glp: bool,
        via_glps: bool,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Number of modalities in φ's language: one past the largest index
/// mentioned, 0 for a propositional formula.
fn language_count(f: &Formula) -> u32 {
    f.box_normal().max_modality().map_or(0, |m| m + 1)
}

/// Decides arithmetical unifiability of φ: yes iff the closed implication
/// ⟨n⟩⊤ → ¬[0]φ has a countermodel, where n is the modality count of φ's
/// language. The index n must lie outside φ for the criterion to hold
/// ([n] has to sit above every reflection instance for φ's subformulas),
/// so a formula using the configured top modality transparently gets one
/// extra index to test with.
pub fn arith_unifiable(f: &Formula, cfg: &EngineConfig) -> Result<ArithDecision, EngineError> {
    let n = language_count(f);
    let reduced = Formula::implies(
        Formula::dia(n, Formula::Top),
        Formula::not(Formula::bx(0, f.clone())),
    );
    let mut cfg = cfg.clone();
    cfg.max_modality = cfg.max_modality.max(n + 1);
    let verdict = decide_glp(&reduced, &cfg)?;
    Ok(ArithDecision {
        answer: verdict.is_invalid(),
        reduced,
        verdict,
    })
}

/// The independent route to the same answer: φ is arithmetically
/// unifiable iff GLPS does not refute [0]φ.
pub fn arith_unifiable_glps(f: &Formula, cfg: &EngineConfig) -> Result<ArithDecision, EngineError> {
    let reduced = Formula::not(Formula::bx(0, f.clone()));
    let verdict = decide_glps(&reduced, cfg)?;
    Ok(ArithDecision {
        answer: verdict.is_invalid(),
        reduced,
        verdict,
    })
}

/// Runs both unifiability criteria and insists they agree; the returned
/// decision is the closed-implication one, whose countermodel makes the
/// better certificate.
pub fn arith_unifiable_cross_checked(
    f: &Formula,
    cfg: &EngineConfig,
) -> Result<ArithDecision, ArithError> {
    let via_glp = arith_unifiable(f, cfg)?;
    let via_glps = arith_unifiable_glps(f, cfg)?;
    if via_glp.answer != via_glps.answer {
        return Err(ArithError::CriteriaDisagree {
            formula: f.clone(),
            via_glp: via_glp.answer,
            via_glps: via_glps.answer,
        });
    }
    Ok(via_glp)
}

/// Decides arithmetical admissibility of a rule: yes iff GLPS derives
/// [0]premise₁ ∧ … → [0]conclusion. A "no" comes with the countermodel
/// for the reduced implication.
pub fn is_arith_admissible(
    rule: &InferenceRule,
    cfg: &EngineConfig,
) -> Result<ArithDecision, EngineError> {
    let hypothesis = Formula::conj(
        rule.premises
            .iter()
            .map(|p| Formula::bx(0, p.clone())),
    );
    let reduced = Formula::implies(hypothesis, Formula::bx(0, rule.conclusion.clone()));
    let verdict = decide_glps(&reduced, cfg)?;
    Ok(ArithDecision {
        answer: !verdict.is_invalid(),
        reduced,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn p(text: &str) -> Formula {
        parse(text, 4).unwrap()
    }

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn unifiability_examples_agree_across_criteria() {
        let cases = [("p0", true), ("[1]p0", true), ("<0>T", false)];
        for (text, expected) in cases {
            let f = p(text);
            let decision = arith_unifiable_cross_checked(&f, &cfg()).unwrap();
            assert_eq!(decision.answer, expected, "{text}");
        }
    }

    #[test]
    fn unifiability_test_modality_sits_above_the_formula() {
        let d = arith_unifiable(&p("p0"), &cfg()).unwrap();
        assert_eq!(d.reduced, p("<0>T -> ~[0]p0"));

        let d = arith_unifiable(&p("[1]p0"), &cfg()).unwrap();
        assert_eq!(d.reduced, p("<2>T -> ~[0][1]p0"));

        // [1]⊥ is closed and underivable, hence not unifiable; testing
        // with ⟨1⟩ instead of ⟨2⟩ would wrongly answer yes here.
        let boxed_bot = p("[1]F");
        let decision = arith_unifiable_cross_checked(&boxed_bot, &cfg()).unwrap();
        assert!(!decision.answer);

        let too_low = Formula::implies(
            Formula::dia(1, Formula::Top),
            Formula::not(Formula::bx(0, boxed_bot)),
        );
        assert!(decide_glp(&too_low, &cfg()).unwrap().is_invalid());
    }

    #[test]
    fn unifiability_handles_the_top_configured_modality() {
        let f = p("[3]p0");
        let decision = arith_unifiable(&f, &cfg()).unwrap();
        assert!(decision.answer);
        assert_eq!(decision.reduced.to_string(), "<4>T -> ~[0][3]p0");
    }

    #[test]
    fn admissibility_examples() {
        let yes = is_arith_admissible(
            &InferenceRule::new(vec![p("<0>T")], Formula::Bot),
            &cfg(),
        )
        .unwrap();
        assert!(yes.answer);
        assert_eq!(yes.reduced, p("[0]<0>T -> [0]F"));

        let nec = is_arith_admissible(
            &InferenceRule::new(vec![p("p0")], p("[0]p0")),
            &cfg(),
        )
        .unwrap();
        assert!(nec.answer);

        let no = is_arith_admissible(
            &InferenceRule::new(vec![Formula::Top], p("[0]F")),
            &cfg(),
        )
        .unwrap();
        assert!(!no.answer);
        assert!(no.verdict.countermodel().is_some());
    }

    #[test]
    fn empty_premises_reduce_to_boxed_conclusion() {
        let rule = InferenceRule::new(Vec::new(), p("p0 -> p0"));
        let decision = is_arith_admissible(&rule, &cfg()).unwrap();
        assert!(decision.answer);
        assert_eq!(decision.reduced, p("T -> [0](p0 -> p0)"));
    }

    #[test]
    fn identity_rules_are_admissible() {
        for text in ["p0", "[0]p0", "<1>p1 & p0", "F"] {
            let f = p(text);
            let rule = InferenceRule::new(vec![f.clone()], f);
            assert!(
                is_arith_admissible(&rule, &cfg()).unwrap().answer,
                "{text}"
            );
        }
    }

    #[test]
    fn derivable_rules_are_admissible() {
        let cases = [
            (vec![p("p0 -> p1"), p("p0")], p("p1")),
            (vec![p("[0]p0")], p("[1]p0")),
            (vec![p("p0 & p1")], p("p0")),
        ];
        for (premises, conclusion) in cases {
            let direct = Formula::implies(
                Formula::conj(premises.iter().cloned()),
                conclusion.clone(),
            );
            assert!(!decide_glp(&direct, &cfg()).unwrap().is_invalid());
            let rule = InferenceRule::new(premises, conclusion);
            assert!(is_arith_admissible(&rule, &cfg()).unwrap().answer);
        }
    }

    #[test]
    fn decision_json_shape() {
        let decision = arith_unifiable(&p("p0"), &cfg()).unwrap();
        let json = serde_json::to_value(&decision).unwrap();
        assert_eq!(json["answer"], true);
        assert_eq!(json["reduced"], "<0>T -> ~[0]p0");
        assert_eq!(json["verdict"]["verdict"], "invalid");
    }
}
