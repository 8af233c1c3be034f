//! Finite Kripke models and the frame conditions of the logic J.
//!
//! A J-frame carries one relation per modality. Every relation must be
//! transitive and irreflexive (condition 1); an edge at a higher modality
//! must preserve lower-modality successor sets exactly (condition 2); and
//! a lower-modality edge followed by a higher-modality edge must already
//! be a lower-modality edge (condition 3).

use crate::syntax::Formula;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

pub mod gen;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate world {0:?}")]
    DuplicateWorld(String),
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("modality index {index} out of range (model allows {count})")]
    ModalityOutOfRange { index: u32, count: u32 },
}

/// A finite Kripke model: named worlds, one relation per modality index,
/// and a valuation mapping variable indices to the worlds where they hold.
///
/// Modalities not mentioned by any edge behave as empty relations, so
/// evaluation is total for every formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: Vec<String>,
    index: HashMap<String, usize>,
    modality_count: u32,
    succ: Vec<Vec<BTreeSet<usize>>>,
    valuation: BTreeMap<u32, BTreeSet<usize>>,
}

impl KripkeModel {
    /// Builds a model from flat edge and valuation lists, rejecting
    /// duplicate world names, unknown worlds, and modality indices at or
    /// above `modality_count`.
    pub fn new(
        worlds: Vec<String>,
        modality_count: u32,
        edges: Vec<(u32, String, String)>,
        valuation: Vec<(u32, String)>,
    ) -> Result<Self, ModelError> {
        let mut index = HashMap::with_capacity(worlds.len());
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        let lookup = |name: &String| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| ModelError::UnknownWorld(name.clone()))
        };
        let mut succ = vec![vec![BTreeSet::new(); worlds.len()]; modality_count as usize];
        for (k, from, to) in &edges {
            if *k >= modality_count {
                return Err(ModelError::ModalityOutOfRange {
                    index: *k,
                    count: modality_count,
                });
            }
            succ[*k as usize][lookup(from)?].insert(lookup(to)?);
        }
        let mut val: BTreeMap<u32, BTreeSet<usize>> = BTreeMap::new();
        for (v, world) in &valuation {
            val.entry(*v).or_default().insert(lookup(world)?);
        }
        val.retain(|_, set| !set.is_empty());
        Ok(KripkeModel {
            worlds,
            index,
            modality_count,
            succ,
            valuation: val,
        })
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn modality_count(&self) -> u32 {
        self.modality_count
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// All edges of one relation as name pairs, in world-index order.
    pub fn relation_pairs(&self, k: u32) -> Vec<(&str, &str)> {
        let Some(rows) = self.succ.get(k as usize) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for (x, row) in rows.iter().enumerate() {
            for &y in row {
                out.push((self.worlds[x].as_str(), self.worlds[y].as_str()));
            }
        }
        out
    }

    /// Flat (variable, world) pairs of the valuation.
    pub fn valuation_entries(&self) -> Vec<(u32, &str)> {
        let mut out = Vec::new();
        for (&v, set) in &self.valuation {
            for &x in set {
                out.push((v, self.worlds[x].as_str()));
            }
        }
        out
    }

    fn succ_set(&self, k: u32, x: usize) -> Option<&BTreeSet<usize>> {
        self.succ.get(k as usize).map(|rows| &rows[x])
    }

    /// Evaluates `root` at every world. Subformulas are computed once each
    /// (smallest first, so children are always ready), which keeps repeated
    /// subformulas under nested modalities from blowing up.
    fn eval_all(&self, root: &Formula) -> Vec<bool> {
        let subs = root.subformulas();
        let mut at: HashMap<Formula, usize> = HashMap::with_capacity(subs.len());
        for (i, s) in subs.iter().enumerate() {
            at.insert(s.clone(), i);
        }
        let mut order: Vec<usize> = (0..subs.len()).collect();
        order.sort_by_key(|&i| subs[i].size());
        let n = self.worlds.len();
        let mut truth: Vec<Vec<bool>> = vec![Vec::new(); subs.len()];
        for &i in &order {
            let row: Vec<bool> = match &subs[i] {
                Formula::Var(v) => {
                    let set = self.valuation.get(v);
                    (0..n).map(|x| set.is_some_and(|s| s.contains(&x))).collect()
                }
                Formula::Bot => vec![false; n],
                Formula::Top => vec![true; n],
                Formula::Not(a) => truth[at[&**a]].iter().map(|&t| !t).collect(),
                Formula::And(a, b) => {
                    let (ra, rb) = (&truth[at[&**a]], &truth[at[&**b]]);
                    (0..n).map(|x| ra[x] && rb[x]).collect()
                }
                Formula::Or(a, b) => {
                    let (ra, rb) = (&truth[at[&**a]], &truth[at[&**b]]);
                    (0..n).map(|x| ra[x] || rb[x]).collect()
                }
                Formula::Implies(a, b) => {
                    let (ra, rb) = (&truth[at[&**a]], &truth[at[&**b]]);
                    (0..n).map(|x| !ra[x] || rb[x]).collect()
                }
                Formula::Iff(a, b) => {
                    let (ra, rb) = (&truth[at[&**a]], &truth[at[&**b]]);
                    (0..n).map(|x| ra[x] == rb[x]).collect()
                }
                Formula::Box(k, a) => {
                    let ra = &truth[at[&**a]];
                    (0..n)
                        .map(|x| self.succ_set(*k, x).is_none_or(|s| s.iter().all(|&y| ra[y])))
                        .collect()
                }
                Formula::Dia(k, a) => {
                    let ra = &truth[at[&**a]];
                    (0..n)
                        .map(|x| self.succ_set(*k, x).is_some_and(|s| s.iter().any(|&y| ra[y])))
                        .collect()
                }
            };
            truth[i] = row;
        }
        truth.swap_remove(0)
    }

    /// Truth of `f` at the named world.
    pub fn satisfies(&self, world: &str, f: &Formula) -> Result<bool, ModelError> {
        let x = self
            .world_index(world)
            .ok_or_else(|| ModelError::UnknownWorld(world.to_owned()))?;
        Ok(self.eval_all(f)[x])
    }

    /// True iff `f` holds at every world.
    pub fn valid_in_model(&self, f: &Formula) -> bool {
        self.eval_all(f).into_iter().all(|t| t)
    }

    /// Worlds where `f` holds, in world order.
    pub fn satisfying_worlds(&self, f: &Formula) -> Vec<&str> {
        self.eval_all(f)
            .into_iter()
            .zip(&self.worlds)
            .filter_map(|(t, w)| t.then_some(w.as_str()))
            .collect()
    }

    /// Checks the three J-frame conditions, reporting the first witness
    /// found for each violated condition.
    pub fn is_j_frame(&self) -> JFrameReport {
        let names = |ids: &[usize]| ids.iter().map(|&i| self.worlds[i].clone()).collect();
        let n = self.worlds.len();
        let count = self.modality_count;
        let mut violations = Vec::new();

        let mut c1 = None;
        'c1: for k in 0..count {
            for x in 0..n {
                if self.succ[k as usize][x].contains(&x) {
                    c1 = Some(vec![x]);
                    break 'c1;
                }
            }
        }
        if c1.is_none() {
            'c1t: for k in 0..count {
                let rows = &self.succ[k as usize];
                for x in 0..n {
                    for &y in &rows[x] {
                        for &z in &rows[y] {
                            if !rows[x].contains(&z) {
                                c1 = Some(vec![x, y, z]);
                                break 'c1t;
                            }
                        }
                    }
                }
            }
        }
        if let Some(ws) = c1 {
            violations.push(FrameViolation {
                condition: 1,
                witnesses: names(&ws),
            });
        }

        let mut c2 = None;
        'c2: for m in 0..count {
            for hi in m + 1..count {
                for x in 0..n {
                    for &y in &self.succ[hi as usize][x] {
                        let (sx, sy) = (&self.succ[m as usize][x], &self.succ[m as usize][y]);
                        if let Some(&z) = sx.symmetric_difference(sy).next() {
                            c2 = Some(vec![x, y, z]);
                            break 'c2;
                        }
                    }
                }
            }
        }
        if let Some(ws) = c2 {
            violations.push(FrameViolation {
                condition: 2,
                witnesses: names(&ws),
            });
        }

        let mut c3 = None;
        'c3: for m in 0..count {
            for hi in m + 1..count {
                for x in 0..n {
                    for &y in &self.succ[m as usize][x] {
                        for &z in &self.succ[hi as usize][y] {
                            if !self.succ[m as usize][x].contains(&z) {
                                c3 = Some(vec![x, y, z]);
                                break 'c3;
                            }
                        }
                    }
                }
            }
        }
        if let Some(ws) = c3 {
            violations.push(FrameViolation {
                condition: 3,
                witnesses: names(&ws),
            });
        }

        JFrameReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    /// A world that reaches every other world in one step of some
    /// relation, if any. A lone world counts as a root.
    pub fn find_root(&self) -> Option<&str> {
        'outer: for r in 0..self.worlds.len() {
            for x in 0..self.worlds.len() {
                if x != r
                    && !(0..self.modality_count)
                        .any(|k| self.succ[k as usize][r].contains(&x))
                {
                    continue 'outer;
                }
            }
            return Some(&self.worlds[r]);
        }
        None
    }

    /// Graphviz rendering with one edge style per modality and node
    /// labels listing the variables true at each world.
    pub fn to_dot(&self) -> String {
        const STYLES: [&str; 4] = ["solid", "dashed", "dotted", "bold"];
        let escape = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
        let mut out = String::from("digraph model {\n");
        for (x, w) in self.worlds.iter().enumerate() {
            let vars: Vec<String> = self
                .valuation
                .iter()
                .filter(|(_, set)| set.contains(&x))
                .map(|(v, _)| format!("p{v}"))
                .collect();
            let label = if vars.is_empty() {
                escape(w)
            } else {
                format!("{}\\n{}", escape(w), vars.join(" "))
            };
            out.push_str(&format!("  \"{}\" [label=\"{}\"];\n", escape(w), label));
        }
        for k in 0..self.modality_count {
            for (from, to) in self.relation_pairs(k) {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}\", style={}];\n",
                    escape(from),
                    escape(to),
                    k,
                    STYLES[k as usize % STYLES.len()]
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Result of checking the J-frame conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JFrameReport {
    pub ok: bool,
    pub violations: Vec<FrameViolation>,
}

/// One violated condition (1, 2, or 3) with the worlds witnessing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrameViolation {
    pub condition: u8,
    pub witnesses: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    worlds: Vec<String>,
    relations: BTreeMap<String, Vec<(String, String)>>,
    valuation: BTreeMap<String, Vec<String>>,
}

impl Serialize for KripkeModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let relations = (0..self.modality_count)
            .map(|k| {
                let pairs = self
                    .relation_pairs(k)
                    .into_iter()
                    .map(|(a, b)| (a.to_owned(), b.to_owned()))
                    .collect();
                (k.to_string(), pairs)
            })
            .collect();
        let valuation = self
            .valuation
            .iter()
            .map(|(v, set)| {
                let ws = set.iter().map(|&x| self.worlds[x].clone()).collect();
                (format!("p{v}"), ws)
            })
            .collect();
        ModelJson {
            worlds: self.worlds.clone(),
            relations,
            valuation,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for KripkeModel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let mj = ModelJson::deserialize(deserializer)?;
        let mut count = 0;
        let mut edges = Vec::new();
        for (key, pairs) in &mj.relations {
            let k: u32 = key
                .parse()
                .map_err(|_| D::Error::custom(format!("bad modality key {key:?}")))?;
            count = count.max(k + 1);
            for (a, b) in pairs {
                edges.push((k, a.clone(), b.clone()));
            }
        }
        let mut valuation = Vec::new();
        for (key, ws) in &mj.valuation {
            let v: u32 = key
                .strip_prefix('p')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| D::Error::custom(format!("bad variable key {key:?}")))?;
            for w in ws {
                valuation.push((v, w.clone()));
            }
        }
        KripkeModel::new(mj.worlds, count, edges, valuation).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn w(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn e(edges: &[(u32, &str, &str)]) -> Vec<(u32, String, String)> {
        edges
            .iter()
            .map(|&(k, a, b)| (k, a.to_string(), b.to_string()))
            .collect()
    }

    /// Two worlds, a single edge at modality 1, p0 false everywhere.
    fn two_world_model() -> KripkeModel {
        KripkeModel::new(w(&["w", "v"]), 2, e(&[(1, "w", "v")]), vec![]).unwrap()
    }

    #[test]
    fn construction_rejects_malformed_input() {
        assert_eq!(
            KripkeModel::new(w(&["a", "a"]), 1, vec![], vec![]),
            Err(ModelError::DuplicateWorld("a".into()))
        );
        assert_eq!(
            KripkeModel::new(w(&["a"]), 1, e(&[(0, "a", "b")]), vec![]),
            Err(ModelError::UnknownWorld("b".into()))
        );
        assert_eq!(
            KripkeModel::new(w(&["a"]), 1, e(&[(1, "a", "a")]), vec![]),
            Err(ModelError::ModalityOutOfRange { index: 1, count: 1 })
        );
        assert_eq!(
            KripkeModel::new(w(&["a"]), 1, vec![], vec![(0, "b".into())]),
            Err(ModelError::UnknownWorld("b".into()))
        );
    }

    #[test]
    fn frame_check_examples() {
        assert!(two_world_model().is_j_frame().ok);

        let reflexive =
            KripkeModel::new(w(&["w"]), 1, e(&[(0, "w", "w")]), vec![]).unwrap();
        let report = reflexive.is_j_frame();
        assert!(!report.ok);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].condition, 1);
        assert_eq!(report.violations[0].witnesses, vec!["w"]);

        let skewed = KripkeModel::new(
            w(&["w", "v", "u"]),
            2,
            e(&[(1, "w", "v"), (0, "w", "u")]),
            vec![],
        )
        .unwrap();
        let report = skewed.is_j_frame();
        assert!(!report.ok);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].condition, 2);
        assert_eq!(report.violations[0].witnesses, vec!["w", "v", "u"]);
    }

    #[test]
    fn frame_check_flags_intransitivity_and_condition_3() {
        let chain = KripkeModel::new(
            w(&["a", "b", "c"]),
            1,
            e(&[(0, "a", "b"), (0, "b", "c")]),
            vec![],
        )
        .unwrap();
        let report = chain.is_j_frame();
        assert_eq!(report.violations[0].condition, 1);
        assert_eq!(report.violations[0].witnesses, vec!["a", "b", "c"]);

        let hook = KripkeModel::new(
            w(&["a", "b", "c"]),
            2,
            e(&[(0, "a", "b"), (1, "b", "c")]),
            vec![],
        )
        .unwrap();
        let report = hook.is_j_frame();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].condition, 3);
        assert_eq!(report.violations[0].witnesses, vec!["a", "b", "c"]);
    }

    #[test]
    fn satisfies_examples() {
        let m = two_world_model();
        let box0 = parse("[0]p0", 2).unwrap();
        let box1 = parse("[1]p0", 2).unwrap();
        assert_eq!(m.satisfies("w", &box0), Ok(true));
        assert_eq!(m.satisfies("w", &box1), Ok(false));
        assert_eq!(m.satisfies("v", &Formula::Top), Ok(true));
        assert_eq!(
            m.satisfies("missing", &Formula::Top),
            Err(ModelError::UnknownWorld("missing".into()))
        );
    }

    #[test]
    fn valid_in_model_examples() {
        let m = two_world_model();
        assert!(!m.valid_in_model(&parse("[0]p0 -> [1]p0", 2).unwrap()));
        assert!(m.valid_in_model(&Formula::Top));
        assert_eq!(m.satisfying_worlds(&parse("[1]p0", 2).unwrap()), vec!["v"]);

        let loeb = parse("[0]([0]F -> F) -> [0]F", 1).unwrap();
        let chain = KripkeModel::new(
            w(&["a", "b", "c"]),
            1,
            e(&[(0, "a", "b"), (0, "b", "c"), (0, "a", "c")]),
            vec![],
        )
        .unwrap();
        assert!(chain.is_j_frame().ok);
        assert!(chain.valid_in_model(&loeb));
    }

    #[test]
    fn find_root_examples() {
        assert_eq!(two_world_model().find_root(), Some("w"));
        let isolated = KripkeModel::new(w(&["a", "b"]), 1, vec![], vec![]).unwrap();
        assert_eq!(isolated.find_root(), None);
        let single = KripkeModel::new(w(&["a"]), 1, vec![], vec![]).unwrap();
        assert_eq!(single.find_root(), Some("a"));
    }

    #[test]
    fn json_round_trip_and_exact_shape() {
        let m = KripkeModel::new(
            w(&["w0", "w1"]),
            1,
            e(&[(0, "w0", "w1")]),
            vec![(0, "w1".into())],
        )
        .unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(
            json,
            r#"{"worlds":["w0","w1"],"relations":{"0":[["w0","w1"]]},"valuation":{"p0":["w1"]}}"#
        );
        let back: KripkeModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);

        let two = two_world_model();
        let back: KripkeModel = serde_json::from_str(&serde_json::to_string(&two).unwrap()).unwrap();
        assert_eq!(back, two);
        assert_eq!(back.modality_count(), 2);
    }

    #[test]
    fn json_rejects_bad_references() {
        assert!(serde_json::from_str::<KripkeModel>(
            r#"{"worlds":["w0"],"relations":{"0":[["w0","w9"]]},"valuation":{}}"#
        )
        .is_err());
        assert!(serde_json::from_str::<KripkeModel>(
            r#"{"worlds":["w0"],"relations":{"x":[]},"valuation":{}}"#
        )
        .is_err());
        assert!(serde_json::from_str::<KripkeModel>(
            r#"{"worlds":["w0"],"relations":{},"valuation":{"q0":["w0"]}}"#
        )
        .is_err());
    }

    #[test]
    fn dot_export_styles_edges_by_modality() {
        let dot = two_world_model().to_dot();
        assert!(dot.contains("\"w\" -> \"v\" [label=\"1\", style=dashed];"));
        assert!(dot.starts_with("digraph model {"));
    }
}
