//! One binary over the whole toolkit, with exit codes meant for
//! scripting: 0 = derivable/yes/verified, 1 = countermodel/no,
//! 2 = unknown, 3 = resource limits hit, 64 = usage. `--json` switches
//! every answer to a single machine-readable object; batch mode reads a
//! file of JSON queries (one per line), runs them concurrently, and
//! prints one JSON result per line in input order.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use glp_core::arith::{
    arith_unifiable, arith_unifiable_cross_checked, is_arith_admissible, ArithDecision,
    ArithError, InferenceRule,
};
use glp_core::engine::{
    self, h_formula, m_formula, m_plus, r_formula, EngineConfig, EngineError, Verdict,
};
use glp_core::proofs::{check_proof, HilbertProof};
use glp_core::semantics::KripkeModel;
use glp_core::syntax::{parse, Formula, LogicId, Substitution};
use glp_core::unify::{
    is_unifier, q_chain_witness, q_formula, search_ground_unifier, QFamily, QKind,
    UnifiabilityAnswer, UnifyError,
};
use glp_core::worms::{normalize_dia0, Dia0Normal, WormError};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "glp",
    version,
    about = "Derivability, countermodels, proofs, and unification for the polymodal provability logics GLP and J"
)]
struct Cli {
    /// Print results as one JSON object (batch mode always does).
    #[arg(long, global = true)]
    json: bool,

    /// Countermodel search cap in worlds (falls back to GLP_MAX_WORLDS,
    /// then 8).
    #[arg(long, global = true)]
    max_worlds: Option<usize>,

    /// Search node budget before giving up with a resource error.
    #[arg(long, global = true)]
    node_budget: Option<u64>,

    /// Keep the search order deterministic (default true).
    #[arg(long, global = true)]
    deterministic: Option<bool>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide derivability in GL, J, GLP, or GLPS.
    Decide {
        /// gl, j, glp, glps, or an explicit form like GLP(3).
        #[arg(long)]
        logic: String,
        #[arg(long)]
        formula: String,
        /// Where to write the countermodel when the formula is invalid
        /// (.dot renders for Graphviz, anything else gets model JSON).
        #[arg(long)]
        countermodel: Option<PathBuf>,
    },
    /// Kripke model utilities.
    Model {
        #[command(subcommand)]
        command: ModelCommand,
    },
    /// Hilbert proof utilities.
    Proof {
        #[command(subcommand)]
        command: ProofCommand,
    },
    /// Print a reduction formula or a unifier-family formula.
    Reduce {
        /// m, mplus, h, or r; needs --formula.
        #[arg(long)]
        transform: Option<TransformKind>,
        #[arg(long)]
        formula: Option<String>,
        /// q, qbig, or qstar; needs --k.
        #[arg(long)]
        family: Option<FamilyKind>,
        #[arg(long)]
        k: Option<u32>,
        /// Variable index the family is built over.
        #[arg(long, default_value_t = 0)]
        variable: u32,
    },
    /// Unifier checking and search.
    Unify {
        #[command(subcommand)]
        command: UnifyCommand,
    },
    /// Decide arithmetical admissibility of a rule.
    Admissible {
        /// Premises separated by ';' (omit for a premise-free rule).
        #[arg(long)]
        premises: Option<String>,
        #[arg(long)]
        conclusion: String,
    },
    /// Decide arithmetical unifiability of a formula.
    ArithUnifiable {
        #[arg(long)]
        formula: String,
        /// Also run the independent reflection-closure criterion and
        /// fail loudly if the two disagree.
        #[arg(long)]
        cross_check: bool,
    },
    /// Closed-fragment utilities.
    Worm {
        #[command(subcommand)]
        command: WormCommand,
    },
    /// Run a file of JSON queries (one object per line) concurrently;
    /// results print in input order, each with its own exit code.
    Batch { file: PathBuf },
}

#[derive(Subcommand)]
enum ModelCommand {
    /// Check the frame conditions of a model file, optionally
    /// evaluating a formula in it.
    Check {
        file: PathBuf,
        #[arg(long)]
        formula: Option<String>,
    },
}

#[derive(Subcommand)]
enum ProofCommand {
    /// Verify a proof file line by line.
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum UnifyCommand {
    /// Test whether a substitution unifies a formula.
    Check {
        #[arg(long)]
        formula: String,
        /// Bindings like "p0:=T;p1:=[0]p0".
        #[arg(long)]
        subst: String,
    },
    /// Search for a variable-free unifier.
    Search {
        #[arg(long)]
        formula: String,
        /// Largest closed formula (in AST nodes) tried per variable.
        #[arg(long, default_value_t = 7)]
        size_bound: usize,
    },
    /// Print a unifier-family member, or verify the chain ordering
    /// between two of them with --j.
    Qchain {
        #[arg(long)]
        family: FamilyKind,
        #[arg(long)]
        k: u32,
        /// Verify index k precedes index j in the family ordering
        /// (qbig only).
        #[arg(long)]
        j: Option<u32>,
    },
}

#[derive(Subcommand)]
enum WormCommand {
    /// Reduce <0>φ to ⊥ or a worm for variable-free φ.
    Normalize {
        #[arg(long)]
        formula: String,
        /// Longest worm tried.
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TransformKind {
    M,
    Mplus,
    H,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum FamilyKind {
    Q,
    Qbig,
    Qstar,
}

impl FamilyKind {
    fn q_kind(self) -> QKind {
        match self {
            FamilyKind::Q => QKind::Q,
            FamilyKind::Qbig => QKind::QBig,
            FamilyKind::Qstar => QKind::QStar,
        }
    }

    fn label(self) -> &'static str {
        match self {
            FamilyKind::Q => "q",
            FamilyKind::Qbig => "qbig",
            FamilyKind::Qstar => "qstar",
        }
    }
}

/// A self-contained query, shared by the command line and batch mode.
enum Query {
    Decide {
        logic: String,
        formula: String,
        countermodel: Option<PathBuf>,
    },
    ModelCheck {
        model: ModelSource,
        formula: Option<String>,
    },
    ProofCheck {
        proof: ProofSource,
    },
    Reduce {
        transform: Option<TransformKind>,
        formula: Option<String>,
        family: Option<FamilyKind>,
        k: Option<u32>,
        variable: u32,
    },
    UnifyCheck {
        formula: String,
        subst: String,
    },
    UnifySearch {
        formula: String,
        size_bound: usize,
    },
    Qchain {
        family: FamilyKind,
        k: u32,
        j: Option<u32>,
    },
    Admissible {
        premises: Vec<String>,
        conclusion: String,
    },
    ArithUnifiable {
        formula: String,
        cross_check: bool,
    },
    WormNormalize {
        formula: String,
        bound: usize,
    },
}

enum ModelSource {
    File(PathBuf),
    Inline(Value),
}

enum ProofSource {
    File(PathBuf),
    Inline(Value),
}

/// One batch line: a tagged query plus optional per-query config
/// overrides.
#[derive(Deserialize)]
struct BatchLine {
    #[serde(default)]
    max_worlds: Option<usize>,
    #[serde(default)]
    node_budget: Option<u64>,
    #[serde(flatten)]
    request: QueryRequest,
}

#[derive(Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum QueryRequest {
    Decide {
        logic: String,
        formula: String,
        #[serde(default)]
        countermodel: Option<PathBuf>,
    },
    ModelCheck {
        model: Value,
        #[serde(default)]
        formula: Option<String>,
    },
    ProofCheck {
        proof: Value,
    },
    Reduce {
        #[serde(default)]
        transform: Option<TransformKind>,
        #[serde(default)]
        formula: Option<String>,
        #[serde(default)]
        family: Option<FamilyKind>,
        #[serde(default)]
        k: Option<u32>,
        #[serde(default)]
        variable: Option<u32>,
    },
    UnifyCheck {
        formula: String,
        subst: String,
    },
    UnifySearch {
        formula: String,
        #[serde(default)]
        size_bound: Option<usize>,
    },
    Qchain {
        family: FamilyKind,
        k: u32,
        #[serde(default)]
        j: Option<u32>,
    },
    Admissible {
        #[serde(default)]
        premises: Vec<String>,
        conclusion: String,
    },
    ArithUnifiable {
        formula: String,
        #[serde(default)]
        cross_check: bool,
    },
    WormNormalize {
        formula: String,
        #[serde(default)]
        bound: Option<usize>,
    },
}

impl From<QueryRequest> for Query {
    fn from(request: QueryRequest) -> Query {
        match request {
            QueryRequest::Decide {
                logic,
                formula,
                countermodel,
            } => Query::Decide {
                logic,
                formula,
                countermodel,
            },
            QueryRequest::ModelCheck { model, formula } => Query::ModelCheck {
                model: ModelSource::Inline(model),
                formula,
            },
            QueryRequest::ProofCheck { proof } => Query::ProofCheck {
                proof: ProofSource::Inline(proof),
            },
            QueryRequest::Reduce {
                transform,
                formula,
                family,
                k,
                variable,
            } => Query::Reduce {
                transform,
                formula,
                family,
                k,
                variable: variable.unwrap_or(0),
            },
            QueryRequest::UnifyCheck { formula, subst } => Query::UnifyCheck { formula, subst },
            QueryRequest::UnifySearch {
                formula,
                size_bound,
            } => Query::UnifySearch {
                formula,
                size_bound: size_bound.unwrap_or(7),
            },
            QueryRequest::Qchain { family, k, j } => Query::Qchain { family, k, j },
            QueryRequest::Admissible {
                premises,
                conclusion,
            } => Query::Admissible {
                premises,
                conclusion,
            },
            QueryRequest::ArithUnifiable {
                formula,
                cross_check,
            } => Query::ArithUnifiable {
                formula,
                cross_check,
            },
            QueryRequest::WormNormalize { formula, bound } => Query::WormNormalize {
                formula,
                bound: bound.unwrap_or(6),
            },
        }
    }
}

enum CliError {
    Usage(String),
    Resource(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Resource(_) => EXIT_RESOURCE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Resource(m) => m,
        }
    }
}

fn engine_error(e: EngineError) -> CliError {
    match e {
        EngineError::BudgetExhausted
        | EngineError::ClosureTooLarge { .. }
        | EngineError::TooManyAtoms { .. }
        | EngineError::CertificateCheck(_) => CliError::Resource(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

struct Outcome {
    json: Map<String, Value>,
    text: String,
    code: u8,
}

impl Outcome {
    fn new(json: Map<String, Value>, text: impl Into<String>, code: u8) -> Outcome {
        Outcome {
            json,
            text: text.into(),
            code,
        }
    }
}

fn object(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(map) => map,
        other => {
            let mut map = Map::new();
            map.insert("value".into(), other);
            map
        }
    }
}

fn parse_formula(text: &str, modality_count: u32) -> Result<Formula, CliError> {
    parse(text, modality_count)
        .map_err(|e| CliError::Usage(format!("cannot parse formula {text:?}: {e}")))
}

fn parse_logic(text: &str, default_count: u32) -> Result<LogicId, CliError> {
    if let Ok(logic) = LogicId::from_str(text) {
        return Ok(logic);
    }
    match text.trim().to_ascii_lowercase().as_str() {
        "j" => Ok(LogicId::J(default_count)),
        "glp" => Ok(LogicId::Glp(default_count)),
        "glps" => Ok(LogicId::Glps(default_count)),
        _ => Err(CliError::Usage(format!(
            "unknown logic {text:?}; use gl, j, glp, glps, or an explicit count like GLP(3)"
        ))),
    }
}

fn parse_subst(text: &str, modality_count: u32) -> Result<Substitution, CliError> {
    let mut sigma = Substitution::identity();
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (var, image) = part.split_once(":=").ok_or_else(|| {
            CliError::Usage(format!("binding {part:?} must look like p0:=<formula>"))
        })?;
        let index: u32 = var
            .trim()
            .strip_prefix('p')
            .and_then(|digits| digits.parse().ok())
            .ok_or_else(|| {
                CliError::Usage(format!("bad variable {:?} in substitution", var.trim()))
            })?;
        sigma.bind(index, parse_formula(image, modality_count)?);
    }
    Ok(sigma)
}

fn subst_json(sigma: &Substitution) -> Value {
    let map: Map<String, Value> = sigma
        .bindings()
        .map(|(v, f)| (format!("p{v}"), Value::String(f.to_string())))
        .collect();
    Value::Object(map)
}

fn write_model(path: &Path, model: &KripkeModel) -> Result<(), CliError> {
    let payload = if path.extension().is_some_and(|e| e == "dot") {
        model.to_dot()
    } else {
        let mut text = serde_json::to_string_pretty(model).expect("model serializes");
        text.push('\n');
        text
    };
    fs::write(path, payload)
        .map_err(|e| CliError::Resource(format!("cannot write {}: {e}", path.display())))
}

fn run_decide(
    logic_text: &str,
    formula_text: &str,
    countermodel: Option<&Path>,
    cfg: &EngineConfig,
) -> Result<Outcome, CliError> {
    let logic = parse_logic(logic_text, cfg.max_modality)?;
    let f = parse_formula(formula_text, logic.modality_count())?;
    let verdict = engine::decide(logic, &f, cfg).map_err(engine_error)?;
    let mut out = object(serde_json::to_value(&verdict).expect("verdict serializes"));
    out.insert("logic".into(), Value::String(logic.to_string()));
    out.insert("formula".into(), Value::String(f.to_string()));
    match &verdict {
        Verdict::Invalid {
            countermodel: model,
            refuted_at,
        } => {
            let mut text = format!(
                "invalid: refuted at {refuted_at} ({} worlds)",
                model.worlds().len()
            );
            if let Some(path) = countermodel {
                write_model(path, model)?;
                out.insert(
                    "countermodel_file".into(),
                    Value::String(path.display().to_string()),
                );
                let _ = write!(text, "; countermodel written to {}", path.display());
            }
            Ok(Outcome::new(out, text, EXIT_NO))
        }
        Verdict::NoCountermodelWithinCap { cap } => Ok(Outcome::new(
            out,
            format!("no countermodel within cap {cap}"),
            EXIT_YES,
        )),
    }
}

fn load_model(source: &ModelSource) -> Result<KripkeModel, CliError> {
    match source {
        ModelSource::File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("bad model in {}: {e}", path.display())))
        }
        ModelSource::Inline(value) => serde_json::from_value(value.clone())
            .map_err(|e| CliError::Usage(format!("bad inline model: {e}"))),
    }
}

fn run_model_check(
    source: &ModelSource,
    formula: Option<&str>,
    cfg: &EngineConfig,
) -> Result<Outcome, CliError> {
    let model = load_model(source)?;
    let report = model.is_j_frame();
    let mut out = Map::new();
    out.insert("worlds".into(), json!(model.worlds().len()));
    out.insert("modalities".into(), json!(model.modality_count()));
    out.insert(
        "frame".into(),
        serde_json::to_value(&report).expect("report serializes"),
    );
    out.insert("root".into(), json!(model.find_root()));
    let mut text = if report.ok {
        format!("J-frame ok ({} worlds)", model.worlds().len())
    } else {
        let conditions: Vec<String> = report
            .violations
            .iter()
            .map(|v| format!("condition {} at [{}]", v.condition, v.witnesses.join(", ")))
            .collect();
        format!("J-frame violations: {}", conditions.join("; "))
    };
    if let Some(formula_text) = formula {
        let f = parse_formula(formula_text, cfg.max_modality)?;
        let valid = model.valid_in_model(&f);
        let satisfying: Vec<&str> = model.satisfying_worlds(&f);
        out.insert("formula".into(), Value::String(f.to_string()));
        out.insert("valid_in_model".into(), json!(valid));
        out.insert("satisfying_worlds".into(), json!(satisfying));
        if valid {
            let _ = write!(text, "; formula holds at every world");
        } else {
            let _ = write!(text, "; formula true at [{}] only", satisfying.join(", "));
        }
    }
    let code = if report.ok { EXIT_YES } else { EXIT_NO };
    Ok(Outcome::new(out, text, code))
}

fn load_proof(source: &ProofSource) -> Result<HilbertProof, CliError> {
    match source {
        ProofSource::File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("bad proof in {}: {e}", path.display())))
        }
        ProofSource::Inline(value) => serde_json::from_value(value.clone())
            .map_err(|e| CliError::Usage(format!("bad inline proof: {e}"))),
    }
}

fn run_proof_check(source: &ProofSource) -> Result<Outcome, CliError> {
    let proof = load_proof(source)?;
    let mut out = Map::new();
    out.insert("logic".into(), Value::String(proof.logic.to_string()));
    out.insert(
        "conclusion".into(),
        Value::String(proof.conclusion.to_string()),
    );
    out.insert("lines".into(), json!(proof.lines.len()));
    match check_proof(&proof) {
        Ok(()) => {
            out.insert("ok".into(), json!(true));
            let text = format!(
                "proof checks: {} lines concluding {}",
                proof.lines.len(),
                proof.conclusion
            );
            Ok(Outcome::new(out, text, EXIT_YES))
        }
        Err(e) => {
            out.insert("ok".into(), json!(false));
            out.insert("error".into(), Value::String(e.to_string()));
            Ok(Outcome::new(out, format!("proof rejected: {e}"), EXIT_NO))
        }
    }
}

fn run_reduce(
    transform: Option<TransformKind>,
    formula: Option<&str>,
    family: Option<FamilyKind>,
    k: Option<u32>,
    variable: u32,
    cfg: &EngineConfig,
) -> Result<Outcome, CliError> {
    match (transform, family) {
        (Some(kind), None) => {
            let text = formula
                .ok_or_else(|| CliError::Usage("--transform needs --formula".into()))?;
            let f = parse_formula(text, cfg.max_modality)?;
            let result = match kind {
                TransformKind::M => m_formula(&f),
                TransformKind::Mplus => m_plus(&f),
                TransformKind::H => h_formula(&f),
                TransformKind::R => r_formula(&f),
            };
            let mut out = Map::new();
            out.insert(
                "transform".into(),
                Value::String(format!("{kind:?}").to_lowercase()),
            );
            out.insert("input".into(), Value::String(f.to_string()));
            out.insert("formula".into(), Value::String(result.to_string()));
            Ok(Outcome::new(out, result.to_string(), EXIT_YES))
        }
        (None, Some(kind)) => {
            let k = k.ok_or_else(|| CliError::Usage("--family needs --k".into()))?;
            let fam = QFamily::new(kind.q_kind(), k).with_variable(variable);
            let result = q_formula(&fam).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut out = Map::new();
            out.insert("family".into(), Value::String(kind.label().into()));
            out.insert("k".into(), json!(k));
            out.insert("variable".into(), Value::String(format!("p{variable}")));
            out.insert("formula".into(), Value::String(result.to_string()));
            Ok(Outcome::new(out, result.to_string(), EXIT_YES))
        }
        _ => Err(CliError::Usage(
            "reduce needs exactly one of --transform <m|mplus|h|r> or --family <q|qbig|qstar>"
                .into(),
        )),
    }
}

fn run_unify_check(
    formula_text: &str,
    subst_text: &str,
    cfg: &EngineConfig,
) -> Result<Outcome, CliError> {
    let f = parse_formula(formula_text, cfg.max_modality)?;
    let sigma = parse_subst(subst_text, cfg.max_modality)?;
    let logic = LogicId::Glp(cfg.max_modality);
    let verdict = is_unifier(&sigma, &f, logic, cfg).map_err(engine_error)?;
    let unifies = !verdict.is_invalid();
    let mut out = Map::new();
    out.insert("formula".into(), Value::String(f.to_string()));
    out.insert("substitution".into(), subst_json(&sigma));
    out.insert(
        "applied".into(),
        Value::String(sigma.apply(&f).to_string()),
    );
    out.insert("unifier".into(), json!(unifies));
    out.insert(
        "verdict".into(),
        serde_json::to_value(&verdict).expect("verdict serializes"),
    );
    let (text, code) = match &verdict {
        Verdict::NoCountermodelWithinCap { cap } => (
            format!("unifier: yes (no countermodel within cap {cap})"),
            EXIT_YES,
        ),
        Verdict::Invalid { refuted_at, .. } => (
            format!("unifier: no (instance refuted at {refuted_at})"),
            EXIT_NO,
        ),
    };
    Ok(Outcome::new(out, text, code))
}

fn run_unify_search(
    formula_text: &str,
    size_bound: usize,
    cfg: &EngineConfig,
) -> Result<Outcome, CliError> {
    let f = parse_formula(formula_text, cfg.max_modality)?;
    let answer = search_ground_unifier(&f, size_bound, cfg).map_err(engine_error)?;
    let mut out = object(serde_json::to_value(&answer).expect("answer serializes"));
    out.insert("formula".into(), Value::String(f.to_string()));
    let (text, code) = match &answer {
        UnifiabilityAnswer::Unifiable { substitution } => {
            let witness = if substitution.is_identity() {
                "the identity substitution".to_string()
            } else {
                substitution
                    .bindings()
                    .map(|(v, image)| format!("p{v} -> {image}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            (format!("unifiable via {witness}"), EXIT_YES)
        }
        UnifiabilityAnswer::NotUnifiable { refutation } => (
            format!("not unifiable: {refutation} is derivable"),
            EXIT_NO,
        ),
        UnifiabilityAnswer::Unknown { candidates_tried } => (
            format!("unknown after {candidates_tried} candidates (size bound {size_bound})"),
            EXIT_UNKNOWN,
        ),
    };
    Ok(Outcome::new(out, text, code))
}

fn run_qchain(
    family: FamilyKind,
    k: u32,
    j: Option<u32>,
    cfg: &EngineConfig,
) -> Result<Outcome, CliError> {
    let Some(j) = j else {
        return run_reduce(None, None, Some(family), Some(k), 0, cfg);
    };
    if family != FamilyKind::Qbig {
        return Err(CliError::Usage(
            "chain witnesses are defined for --family qbig only".into(),
        ));
    }
    match q_chain_witness(k, j, cfg) {
        Ok((theta, verified)) => {
            let mut out = Map::new();
            out.insert("i".into(), json!(k));
            out.insert("j".into(), json!(j));
            out.insert("theta".into(), subst_json(&theta));
            out.insert("verified".into(), json!(verified));
            Ok(Outcome::new(
                out,
                format!("chain witness verified: index {k} precedes index {j}"),
                EXIT_YES,
            ))
        }
        Err(UnifyError::RefutedEquivalence { formula }) => {
            let mut out = Map::new();
            out.insert("i".into(), json!(k));
            out.insert("j".into(), json!(j));
            out.insert("verified".into(), json!(false));
            out.insert("refuted".into(), Value::String(formula.to_string()));
            Ok(Outcome::new(
                out,
                format!("chain witness REFUTED: {formula} has a countermodel"),
                EXIT_NO,
            ))
        }
        Err(UnifyError::Engine(e)) => Err(engine_error(e)),
        Err(other) => Err(CliError::Usage(other.to_string())),
    }
}

fn arith_outcome(decision: &ArithDecision, question: &str) -> Outcome {
    let out = object(serde_json::to_value(decision).expect("decision serializes"));
    let (text, code) = if decision.answer {
        (format!("{question}: yes"), EXIT_YES)
    } else {
        (
            format!("{question}: no (decided via {})", decision.reduced),
            EXIT_NO,
        )
    };
    Outcome::new(out, text, code)
}

fn run_admissible(
    premise_texts: &[String],
    conclusion_text: &str,
    cfg: &EngineConfig,
) -> Result<Outcome, CliError> {
    let premises = premise_texts
        .iter()
        .map(|t| parse_formula(t, cfg.max_modality))
        .collect::<Result<Vec<_>, _>>()?;
    let conclusion = parse_formula(conclusion_text, cfg.max_modality)?;
    let rule = InferenceRule::new(premises.clone(), conclusion.clone());
    let decision = is_arith_admissible(&rule, cfg).map_err(engine_error)?;
    let mut outcome = arith_outcome(&decision, "admissible");
    outcome.json.insert(
        "premises".into(),
        Value::Array(
            premises
                .iter()
                .map(|p| Value::String(p.to_string()))
                .collect(),
        ),
    );
    outcome
        .json
        .insert("conclusion".into(), Value::String(conclusion.to_string()));
    Ok(outcome)
}

fn run_arith_unifiable(
    formula_text: &str,
    cross_check: bool,
    cfg: &EngineConfig,
) -> Result<Outcome, CliError> {
    let f = parse_formula(formula_text, cfg.max_modality)?;
    let decision = if cross_check {
        arith_unifiable_cross_checked(&f, cfg).map_err(|e| match e {
            ArithError::Engine(engine) => engine_error(engine),
            disagree => CliError::Resource(disagree.to_string()),
        })?
    } else {
        arith_unifiable(&f, cfg).map_err(engine_error)?
    };
    let mut outcome = arith_outcome(&decision, "arithmetically unifiable");
    outcome
        .json
        .insert("formula".into(), Value::String(f.to_string()));
    outcome
        .json
        .insert("cross_checked".into(), json!(cross_check));
    Ok(outcome)
}

fn run_worm_normalize(
    formula_text: &str,
    bound: usize,
    cfg: &EngineConfig,
) -> Result<Outcome, CliError> {
    let f = parse_formula(formula_text, cfg.max_modality)?;
    match normalize_dia0(&f, bound, cfg) {
        Ok(normal) => {
            let mut out = object(serde_json::to_value(&normal).expect("normal serializes"));
            out.insert("formula".into(), Value::String(f.to_string()));
            let (text, code) = match &normal {
                Dia0Normal::Bot => ("<0>-normal form: F".to_string(), EXIT_YES),
                Dia0Normal::Worm(worm) => (format!("<0>-normal form: {worm}"), EXIT_YES),
                Dia0Normal::Unknown { candidates_tried } => (
                    format!("unknown after {candidates_tried} candidates (bound {bound})"),
                    EXIT_UNKNOWN,
                ),
            };
            Ok(Outcome::new(out, text, code))
        }
        Err(WormError::Engine(e)) => Err(engine_error(e)),
        Err(other) => Err(CliError::Usage(other.to_string())),
    }
}

fn split_premises(text: Option<&str>) -> Vec<String> {
    text.map(|t| {
        t.split(';')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::to_string)
            .collect()
    })
    .unwrap_or_default()
}

fn execute(query: &Query, cfg: &EngineConfig) -> Result<Outcome, CliError> {
    match query {
        Query::Decide {
            logic,
            formula,
            countermodel,
        } => run_decide(logic, formula, countermodel.as_deref(), cfg),
        Query::ModelCheck { model, formula } => run_model_check(model, formula.as_deref(), cfg),
        Query::ProofCheck { proof } => run_proof_check(proof),
        Query::Reduce {
            transform,
            formula,
            family,
            k,
            variable,
        } => run_reduce(*transform, formula.as_deref(), *family, *k, *variable, cfg),
        Query::UnifyCheck { formula, subst } => run_unify_check(formula, subst, cfg),
        Query::UnifySearch {
            formula,
            size_bound,
        } => run_unify_search(formula, *size_bound, cfg),
        Query::Qchain { family, k, j } => run_qchain(*family, *k, *j, cfg),
        Query::Admissible {
            premises,
            conclusion,
        } => run_admissible(premises, conclusion, cfg),
        Query::ArithUnifiable {
            formula,
            cross_check,
        } => run_arith_unifiable(formula, *cross_check, cfg),
        Query::WormNormalize { formula, bound } => run_worm_normalize(formula, *bound, cfg),
    }
}

fn run_batch(file: &Path, base: &EngineConfig) -> Result<u8, CliError> {
    let text = fs::read_to_string(file)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let results: Vec<(Value, u8)> = lines
        .par_iter()
        .map(|&(number, line)| {
            let parsed: Result<BatchLine, _> = serde_json::from_str(line);
            let (mut out, code) = match parsed {
                Ok(batch_line) => {
                    let mut cfg = base.clone();
                    if let Some(w) = batch_line.max_worlds {
                        cfg.max_worlds = w;
                    }
                    if let Some(b) = batch_line.node_budget {
                        cfg.node_budget = b;
                    }
                    let query = Query::from(batch_line.request);
                    match execute(&query, &cfg) {
                        Ok(outcome) => (outcome.json, outcome.code),
                        Err(e) => {
                            let mut map = Map::new();
                            map.insert("error".into(), Value::String(e.message().to_string()));
                            (map, e.code())
                        }
                    }
                }
                Err(e) => {
                    let mut map = Map::new();
                    map.insert("error".into(), Value::String(format!("bad query: {e}")));
                    (map, EXIT_USAGE)
                }
            };
            out.insert("line".into(), json!(number + 1));
            out.insert("exit".into(), json!(code));
            (Value::Object(out), code)
        })
        .collect();
    let mut final_code = EXIT_YES;
    for (value, code) in &results {
        println!("{value}");
        if final_code == EXIT_YES && !matches!(*code, EXIT_YES | EXIT_NO | EXIT_UNKNOWN) {
            final_code = *code;
        }
    }
    Ok(final_code)
}

fn build_config(cli: &Cli) -> Result<EngineConfig, CliError> {
    let mut cfg = EngineConfig::default();
    if let Ok(value) = std::env::var("GLP_MAX_WORLDS") {
        cfg.max_worlds = value.trim().parse().map_err(|_| {
            CliError::Usage(format!("GLP_MAX_WORLDS must be a world count, got {value:?}"))
        })?;
    }
    if let Some(w) = cli.max_worlds {
        cfg.max_worlds = w;
    }
    if let Some(b) = cli.node_budget {
        cfg.node_budget = b;
    }
    if let Some(d) = cli.deterministic {
        cfg.deterministic = d;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let cfg = build_config(&cli)?;
    let query = match cli.command {
        Command::Batch { file } => return run_batch(&file, &cfg),
        Command::Decide {
            logic,
            formula,
            countermodel,
        } => Query::Decide {
            logic,
            formula,
            countermodel,
        },
        Command::Model {
            command: ModelCommand::Check { file, formula },
        } => Query::ModelCheck {
            model: ModelSource::File(file),
            formula,
        },
        Command::Proof {
            command: ProofCommand::Check { file },
        } => Query::ProofCheck {
            proof: ProofSource::File(file),
        },
        Command::Reduce {
            transform,
            formula,
            family,
            k,
            variable,
        } => Query::Reduce {
            transform,
            formula,
            family,
            k,
            variable,
        },
        Command::Unify { command } => match command {
            UnifyCommand::Check { formula, subst } => Query::UnifyCheck { formula, subst },
            UnifyCommand::Search {
                formula,
                size_bound,
            } => Query::UnifySearch {
                formula,
                size_bound,
            },
            UnifyCommand::Qchain { family, k, j } => Query::Qchain { family, k, j },
        },
        Command::Admissible {
            premises,
            conclusion,
        } => Query::Admissible {
            premises: split_premises(premises.as_deref()),
            conclusion,
        },
        Command::ArithUnifiable {
            formula,
            cross_check,
        } => Query::ArithUnifiable {
            formula,
            cross_check,
        },
        Command::Worm {
            command: WormCommand::Normalize { formula, bound },
        } => Query::WormNormalize { formula, bound },
    };
    let outcome = execute(&query, &cfg)?;
    if cli.json {
        println!("{}", Value::Object(outcome.json));
    } else {
        println!("{}", outcome.text);
    }
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
