//! Formula syntax for polymodal provability logic: the AST, a parser and
//! printer that round-trip exactly, substitutions, and logic identifiers.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

mod parse;

pub use parse::{parse, ParseError};

/// A modal formula. Modalities are written `[k]` / `<k>` with `k` counted
/// from 0; `Dia(k, f)` always means the same as `Not(Box(k, Not(f)))` and
/// semantic code normalizes it away via [`Formula::box_normal`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(u32),
    Bot,
    Top,
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Iff(Arc<Formula>, Arc<Formula>),
    Box(u32, Arc<Formula>),
    Dia(u32, Arc<Formula>),
}

impl Formula {
    pub fn var(index: u32) -> Formula {
        Formula::Var(index)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(Arc::new(lhs), Arc::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Or(Arc::new(lhs), Arc::new(rhs))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Arc::new(lhs), Arc::new(rhs))
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Iff(Arc::new(lhs), Arc::new(rhs))
    }

    pub fn bx(modality: u32, f: Formula) -> Formula {
        Formula::Box(modality, Arc::new(f))
    }

    pub fn dia(modality: u32, f: Formula) -> Formula {
        Formula::Dia(modality, Arc::new(f))
    }

    /// Conjunction of a list, left-folded; the empty conjunction is `T` and a
    /// singleton list is returned as-is (no `And` wrapper).
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::Top,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction of a list, left-folded; the empty disjunction is `F`.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::Bot,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => 1,
            Formula::Not(f) | Formula::Box(_, f) | Formula::Dia(_, f) => 1 + f.size(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Largest modality index occurring in the formula, `None` if the formula
    /// is modality-free.
    pub fn max_modality(&self) -> Option<u32> {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => None,
            Formula::Not(f) => f.max_modality(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => l.max_modality().max(r.max_modality()),
            Formula::Box(k, f) | Formula::Dia(k, f) => Some(f.max_modality().map_or(*k, |m| m.max(*k))),
        }
    }

    /// Variable indices occurring in the formula, ascending.
    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Var(v) => {
                out.insert(*v);
            }
            Formula::Bot | Formula::Top => {}
            Formula::Not(f) | Formula::Box(_, f) | Formula::Dia(_, f) => f.collect_vars(out),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// All subformulas including the formula itself, deduplicated, in
    /// first-occurrence pre-order (a formula precedes its subformulas).
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.walk_subformulas(&mut out, &mut seen);
        out
    }

    fn walk_subformulas(&self, out: &mut Vec<Formula>, seen: &mut HashSet<Formula>) {
        if !seen.insert(self.clone()) {
            return;
        }
        out.push(self.clone());
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => {}
            Formula::Not(f) | Formula::Box(_, f) | Formula::Dia(_, f) => {
                f.walk_subformulas(out, seen)
            }
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.walk_subformulas(out, seen);
                r.walk_subformulas(out, seen);
            }
        }
    }

    /// Rewrites every `Dia(k, f)` into `Not(Box(k, Not(f)))`. Purely
    /// structural; no other simplification is performed.
    pub fn box_normal(&self) -> Formula {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => self.clone(),
            Formula::Not(f) => Formula::not(f.box_normal()),
            Formula::And(l, r) => Formula::and(l.box_normal(), r.box_normal()),
            Formula::Or(l, r) => Formula::or(l.box_normal(), r.box_normal()),
            Formula::Implies(l, r) => Formula::implies(l.box_normal(), r.box_normal()),
            Formula::Iff(l, r) => Formula::iff(l.box_normal(), r.box_normal()),
            Formula::Box(k, f) => Formula::bx(*k, f.box_normal()),
            Formula::Dia(k, f) => Formula::not(Formula::bx(*k, Formula::not(f.box_normal()))),
        }
    }

    /// Checks every modality index against a configured modality count.
    pub fn check_modalities(&self, modality_count: u32) -> Result<(), u32> {
        match self.max_modality() {
            Some(m) if m >= modality_count => Err(m),
            _ => Ok(()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Formula::Var(v) => write!(f, "p{v}")?,
            Formula::Bot => write!(f, "F")?,
            Formula::Top => write!(f, "T")?,
            Formula::Not(x) => {
                write!(f, "~")?;
                x.fmt_prec(f, 4)?;
            }
            Formula::Box(k, x) => {
                write!(f, "[{k}]")?;
                x.fmt_prec(f, 4)?;
            }
            Formula::Dia(k, x) => {
                write!(f, "<{k}>")?;
                x.fmt_prec(f, 4)?;
            }
            Formula::And(l, r) => {
                l.fmt_prec(f, 3)?;
                write!(f, " & ")?;
                r.fmt_prec(f, 4)?;
            }
            Formula::Or(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                r.fmt_prec(f, 3)?;
            }
            Formula::Implies(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, " -> ")?;
                r.fmt_prec(f, 1)?;
            }
            Formula::Iff(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " <-> ")?;
                r.fmt_prec(f, 0)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Prints with the fewest parentheses that still re-parse to the same tree:
/// `&` and `|` associate left, `->` and `<->` associate right, prefix
/// operators bind tightest.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A finite map from variables to formulas; unbound variables are fixed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<u32, Formula>,
}

impl Substitution {
    pub fn identity() -> Substitution {
        Substitution::default()
    }

    pub fn single(var: u32, f: Formula) -> Substitution {
        let mut s = Substitution::default();
        s.bind(var, f);
        s
    }

    /// Adds or replaces a binding. A binding of a variable to itself is
    /// dropped so equal substitutions compare equal.
    pub fn bind(&mut self, var: u32, f: Formula) {
        if f == Formula::Var(var) {
            self.bindings.remove(&var);
        } else {
            self.bindings.insert(var, f);
        }
    }

    pub fn bindings(&self) -> impl Iterator<Item = (u32, &Formula)> {
        self.bindings.iter().map(|(v, f)| (*v, f))
    }

    pub fn is_identity(&self) -> bool {
        self.bindings.is_empty()
    }

    /// The image of a single variable.
    pub fn image(&self, var: u32) -> Formula {
        self.bindings
            .get(&var)
            .cloned()
            .unwrap_or(Formula::Var(var))
    }

    /// Simultaneous substitution: every variable occurrence is replaced by
    /// its image; replacement formulas are not substituted into again.
    pub fn apply(&self, f: &Formula) -> Formula {
        if self.bindings.is_empty() {
            return f.clone();
        }
        match f {
            Formula::Var(v) => self.image(*v),
            Formula::Bot | Formula::Top => f.clone(),
            Formula::Not(x) => Formula::not(self.apply(x)),
            Formula::And(l, r) => Formula::and(self.apply(l), self.apply(r)),
            Formula::Or(l, r) => Formula::or(self.apply(l), self.apply(r)),
            Formula::Implies(l, r) => Formula::implies(self.apply(l), self.apply(r)),
            Formula::Iff(l, r) => Formula::iff(self.apply(l), self.apply(r)),
            Formula::Box(k, x) => Formula::bx(*k, self.apply(x)),
            Formula::Dia(k, x) => Formula::dia(*k, self.apply(x)),
        }
    }

    /// Composition acting as `outer` after `inner`:
    /// `compose(outer, inner).apply(f) == outer.apply(&inner.apply(f))`.
    pub fn compose(outer: &Substitution, inner: &Substitution) -> Substitution {
        let mut out = Substitution::default();
        let mut domain: BTreeSet<u32> = inner.bindings.keys().copied().collect();
        domain.extend(outer.bindings.keys().copied());
        for v in domain {
            out.bind(v, outer.apply(&inner.image(v)));
        }
        out
    }
}

/// Identifies a logic together with its modality count: `Gl` is the
/// unimodal case (one modality, index 0), `J(n)`/`Glp(n)`/`Glps(n)` use
/// modality indices `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicId {
    Gl,
    J(u32),
    Glp(u32),
    Glps(u32),
}

impl LogicId {
    pub fn modality_count(&self) -> u32 {
        match self {
            LogicId::Gl => 1,
            LogicId::J(n) | LogicId::Glp(n) | LogicId::Glps(n) => *n,
        }
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicId::Gl => write!(f, "GL"),
            LogicId::J(n) => write!(f, "J({n})"),
            LogicId::Glp(n) => write!(f, "GLP({n})"),
            LogicId::Glps(n) => write!(f, "GLPS({n})"),
        }
    }
}

/// Parses the `Display` form back, case-insensitively: `GL`, `J(n)`,
/// `GLP(n)`, `GLPS(n)`.
impl std::str::FromStr for LogicId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim().to_ascii_uppercase();
        if text == "GL" {
            return Ok(LogicId::Gl);
        }
        let (name, rest) = text
            .split_once('(')
            .ok_or_else(|| format!("unknown logic {s:?}"))?;
        let n: u32 = rest
            .strip_suffix(')')
            .and_then(|num| num.trim().parse().ok())
            .ok_or_else(|| format!("bad modality count in logic {s:?}"))?;
        match name.trim() {
            "J" => Ok(LogicId::J(n)),
            "GLP" => Ok(LogicId::Glp(n)),
            "GLPS" => Ok(LogicId::Glps(n)),
            _ => Err(format!("unknown logic {s:?}")),
        }
    }
}
