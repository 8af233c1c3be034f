//! The closed fragment: worms, their implication order, bounded
//! ⟨0⟩-normalization, and projection below a modality level.
//!
//! Worms are the variable-free formulas built from ⊤ by prefixing
//! diamonds, ⟨a₁⟩⟨a₂⟩…⟨a_k⟩⊤. They generate the closed fragment up to
//! equivalence: for variable-free φ, the formula ⟨0⟩φ is equivalent to
//! either ⊥ or a worm starting with ⟨0⟩, and worms of that shape are
//! linearly ordered by implication. Normalization here is a verified
//! bounded search over candidate worms rather than a port of the
//! normal-form algorithm the equivalence ultimately rests on; every
//! returned worm is certified by an engine check of the defining
//! equivalence.

use std::fmt;

use crate::engine::{decide_glp, EngineConfig, EngineError, Verdict};
use crate::syntax::Formula;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// A word in the modality alphabet; `letters[0]` is the outermost
/// diamond, the empty word is ⊤.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Worm {
    pub letters: Vec<u32>,
}

impl Worm {
    pub fn new(letters: Vec<u32>) -> Worm {
        Worm { letters }
    }

    pub fn top() -> Worm {
        Worm::new(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_formula(&self) -> Formula {
        self.letters
            .iter()
            .rev()
            .fold(Formula::Top, |acc, &k| Formula::dia(k, acc))
    }
}

impl fmt::Display for Worm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in &self.letters {
            write!(f, "<{k}>")?;
        }
        write!(f, "T")
    }
}

impl From<Vec<u32>> for Worm {
    fn from(letters: Vec<u32>) -> Worm {
        Worm::new(letters)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WormError {
    #[error("formula mentions variable p{0} but must be variable-free")]
    NotClosed(u32),
    #[error("length bound must be at least 1")]
    ZeroBound,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Reads a formula back as a worm if it is literally a stack of diamonds
/// over ⊤; spellings that are merely equivalent to a worm give `None`.
pub fn is_worm(f: &Formula) -> Option<Worm> {
    let mut letters = Vec::new();
    let mut cursor = f;
    loop {
        match cursor {
            Formula::Top => return Some(Worm::new(letters)),
            Formula::Dia(k, inner) => {
                letters.push(*k);
                cursor = inner;
            }
            _ => return None,
        }
    }
}

/// Engine verdict on A → B read as formulas.
pub fn worm_implies(a: &Worm, b: &Worm, cfg: &EngineConfig) -> Result<Verdict, EngineError> {
    let implication = Formula::implies(a.to_formula(), b.to_formula());
    decide_glp(&implication, cfg)
}

/// Outcome of ⟨0⟩-normalization. `Unknown` means the bounded search ran
/// out of candidates, not that no normal form exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dia0Normal {
    Bot,
    Worm(Worm),
    Unknown { candidates_tried: usize },
}

impl Serialize for Dia0Normal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            Dia0Normal::Bot => {
                map.serialize_entry("normal", "bot")?;
            }
            Dia0Normal::Worm(worm) => {
                map.serialize_entry("normal", "worm")?;
                map.serialize_entry("worm", &worm.to_string())?;
            }
            Dia0Normal::Unknown { candidates_tried } => {
                map.serialize_entry("normal", "unknown")?;
                map.serialize_entry("candidates_tried", candidates_tried)?;
            }
        }
        map.end()
    }
}

/// Finds what ⟨0⟩φ collapses to for variable-free φ: first tests whether
/// ⟨0⟩φ is refutable outright, then walks candidate worms ⟨0⟩·w of length
/// at most `length_bound` in length-then-lexicographic order, returning
/// the first one the engine certifies equivalent to ⟨0⟩φ. Tail letters
/// range over φ's modality alphabet (at least {0}).
pub fn normalize_dia0(
    f: &Formula,
    length_bound: usize,
    cfg: &EngineConfig,
) -> Result<Dia0Normal, WormError> {
    if let Some(&variable) = f.vars().iter().next() {
        return Err(WormError::NotClosed(variable));
    }
    if length_bound == 0 {
        return Err(WormError::ZeroBound);
    }
    let target = Formula::dia(0, f.clone());
    if !decide_glp(&Formula::not(target.clone()), cfg)?.is_invalid() {
        return Ok(Dia0Normal::Bot);
    }
    let alphabet = f.box_normal().max_modality().map_or(1, |m| m + 1);
    let mut tried = 0usize;
    for length in 1..=length_bound {
        let mut tail = vec![0u32; length - 1];
        loop {
            let mut letters = Vec::with_capacity(length);
            letters.push(0);
            letters.extend_from_slice(&tail);
            let candidate = Worm::new(letters);
            tried += 1;
            let equivalence = Formula::iff(target.clone(), candidate.to_formula());
            if !decide_glp(&equivalence, cfg)?.is_invalid() {
                return Ok(Dia0Normal::Worm(candidate));
            }
            if !bump_tail(&mut tail, alphabet) {
                break;
            }
        }
    }
    Ok(Dia0Normal::Unknown {
        candidates_tried: tried,
    })
}

/// Advances a word to its lexicographic successor over `0..alphabet`,
/// reporting false once the word wraps around.
fn bump_tail(tail: &mut [u32], alphabet: u32) -> bool {
    for slot in tail.iter_mut().rev() {
        if *slot + 1 < alphabet {
            *slot += 1;
            return true;
        }
        *slot = 0;
    }
    false
}

/// Erases everything at the given modality level: [level]ψ becomes ⊤ and
/// ⟨level⟩ψ becomes ⊥, recursively through the rest of the formula.
pub fn bar_projection(f: &Formula, level: u32) -> Formula {
    match f {
        Formula::Box(k, _) if *k == level => Formula::Top,
        Formula::Dia(k, _) if *k == level => Formula::Bot,
        Formula::Var(_) | Formula::Bot | Formula::Top => f.clone(),
        Formula::Not(inner) => Formula::not(bar_projection(inner, level)),
        Formula::And(l, r) => {
            Formula::and(bar_projection(l, level), bar_projection(r, level))
        }
        Formula::Or(l, r) => Formula::or(bar_projection(l, level), bar_projection(r, level)),
        Formula::Implies(l, r) => {
            Formula::implies(bar_projection(l, level), bar_projection(r, level))
        }
        Formula::Iff(l, r) => {
            Formula::iff(bar_projection(l, level), bar_projection(r, level))
        }
        Formula::Box(k, inner) => Formula::bx(*k, bar_projection(inner, level)),
        Formula::Dia(k, inner) => Formula::dia(*k, bar_projection(inner, level)),
    }
}
