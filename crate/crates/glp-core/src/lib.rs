//! Toolkit for the polymodal provability logic GLP and its Kripke-complete
//! companion J: formula syntax, Hilbert-style proof checking, relational
//! semantics, a derivability engine with countermodel certificates, and
//! unification/admissibility machinery on top of it.

pub mod arith;
pub mod engine;
pub mod proofs;
pub mod semantics;
pub mod syntax;
pub mod unify;
pub mod worms;

pub use arith::{ArithDecision, ArithError, InferenceRule};
pub use engine::{EngineConfig, EngineError, Verdict};
pub use proofs::{check_proof, HilbertProof, Justification, NecDiscipline, ProofError};
pub use semantics::{FrameViolation, JFrameReport, KripkeModel, ModelError};
pub use syntax::{parse, Formula, LogicId, ParseError, Substitution};
pub use unify::{QFamily, QKind, UnifiabilityAnswer, UnifyError};
pub use worms::{bar_projection, is_worm, normalize_dia0, worm_implies, Dia0Normal, Worm, WormError};
