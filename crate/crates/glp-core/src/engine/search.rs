//! Bounded search for rooted J-countermodels.
//!
//! Worlds are labeled with full truth assignments over the closure of the
//! query (its subformulas after translating diamonds away). A label fixes
//! which boxes are true, so a partial model carries two kinds of
//! constraints: every edge must respect the true boxes of its source
//! (commitments), and every false box is an obligation that some
//! successor falsifies its body. The search discharges obligations in a
//! fixed order, trying existing worlds first and then fresh ones, while a
//! worklist closes the relations under transitivity and the two
//! mixed-modality frame conditions, pruning on any reflexive edge or
//! commitment violation. Completed models are therefore rooted J-models
//! in which labels coincide with actual truth, and the query is false at
//! the root.
//!
//! Witnesses are restricted to the classical maximal form: a witness for
//! a false [k]χ must itself satisfy [k]χ, and a fresh witness inherits
//! every true [k]-box of its parent, all lower boxes verbatim (their
//! successor sets are shared), and freedom only in the rest. Some
//! countermodel survives these restrictions whenever any exists, and they
//! cut the label space enough to keep the search fast.

use super::{EngineConfig, EngineError, Verdict};
use crate::semantics::KripkeModel;
use crate::syntax::Formula;
use std::collections::HashMap;

pub(super) const MAX_WORLDS: usize = 16;
const MAX_CLOSURE: usize = 256;
const MAX_ATOMS: usize = 64;

/// Truth bits over the closure, one per subformula index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Bits([u64; 4]);

impl Bits {
    fn get(&self, i: u16) -> bool {
        self.0[i as usize / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: u16, v: bool) {
        let (word, bit) = (i as usize / 64, i % 64);
        if v {
            self.0[word] |= 1 << bit;
        } else {
            self.0[word] &= !(1 << bit);
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Var(u32),
    Bot,
    Top,
    Not(u16),
    And(u16, u16),
    Or(u16, u16),
    Implies(u16, u16),
    Iff(u16, u16),
    Box(u32, u16),
}

#[derive(Debug, Clone, Copy)]
struct BoxNode {
    idx: u16,
    k: u32,
    body: u16,
}

/// The query's subformulas in first-occurrence order (query at index 0),
/// flattened to operator nodes over indices.
struct Closure {
    nodes: Vec<Node>,
    /// Node indices sorted by formula size; evaluating in this order
    /// always sees children before parents.
    eval_order: Vec<u16>,
    /// Nodes a label assigns freely: variables and boxes, by closure index.
    atoms: Vec<u16>,
    /// Closure index -> position in `atoms` (atoms only).
    atom_pos: Vec<u8>,
    /// All box nodes sorted by (modality, closure index).
    boxes: Vec<BoxNode>,
    by_modality: Vec<Vec<BoxNode>>,
    modality_count: u32,
}

impl Closure {
    fn build(query: &Formula) -> Result<Closure, EngineError> {
        let subs = query.subformulas();
        if subs.len() > MAX_CLOSURE {
            return Err(EngineError::ClosureTooLarge {
                size: subs.len(),
                limit: MAX_CLOSURE,
            });
        }
        let mut index: HashMap<&Formula, u16> = HashMap::with_capacity(subs.len());
        for (i, s) in subs.iter().enumerate() {
            index.insert(s, i as u16);
        }
        let nodes: Vec<Node> = subs
            .iter()
            .map(|s| match s {
                Formula::Var(v) => Node::Var(*v),
                Formula::Bot => Node::Bot,
                Formula::Top => Node::Top,
                Formula::Not(a) => Node::Not(index[&**a]),
                Formula::And(a, b) => Node::And(index[&**a], index[&**b]),
                Formula::Or(a, b) => Node::Or(index[&**a], index[&**b]),
                Formula::Implies(a, b) => Node::Implies(index[&**a], index[&**b]),
                Formula::Iff(a, b) => Node::Iff(index[&**a], index[&**b]),
                Formula::Box(k, a) => Node::Box(*k, index[&**a]),
                Formula::Dia(..) => unreachable!("query is box-normalized"),
            })
            .collect();
        let mut eval_order: Vec<u16> = (0..nodes.len() as u16).collect();
        eval_order.sort_by_key(|&i| subs[i as usize].size());

        let atoms: Vec<u16> = (0..nodes.len() as u16)
            .filter(|&i| matches!(nodes[i as usize], Node::Var(_) | Node::Box(..)))
            .collect();
        if atoms.len() > MAX_ATOMS {
            return Err(EngineError::TooManyAtoms {
                count: atoms.len(),
                limit: MAX_ATOMS,
            });
        }
        let mut atom_pos = vec![0u8; nodes.len()];
        for (pos, &i) in atoms.iter().enumerate() {
            atom_pos[i as usize] = pos as u8;
        }
        let mut boxes: Vec<BoxNode> = (0..nodes.len() as u16)
            .filter_map(|i| match nodes[i as usize] {
                Node::Box(k, body) => Some(BoxNode { idx: i, k, body }),
                _ => None,
            })
            .collect();
        boxes.sort_by_key(|b| (b.k, b.idx));
        let modality_count = boxes.iter().map(|b| b.k + 1).max().unwrap_or(0);
        let mut by_modality = vec![Vec::new(); modality_count as usize];
        for b in &boxes {
            by_modality[b.k as usize].push(*b);
        }
        Ok(Closure {
            nodes,
            eval_order,
            atoms,
            atom_pos,
            boxes,
            by_modality,
            modality_count,
        })
    }

    /// Expands an assignment of the atoms into truth bits for the whole
    /// closure.
    fn derive(&self, atom_mask: u64) -> Bits {
        let mut bits = Bits::default();
        for &i in &self.eval_order {
            let v = match self.nodes[i as usize] {
                Node::Var(_) | Node::Box(..) => {
                    atom_mask >> self.atom_pos[i as usize] & 1 == 1
                }
                Node::Top => true,
                Node::Bot => false,
                Node::Not(a) => !bits.get(a),
                Node::And(a, b) => bits.get(a) && bits.get(b),
                Node::Or(a, b) => bits.get(a) || bits.get(b),
                Node::Implies(a, b) => !bits.get(a) || bits.get(b),
                Node::Iff(a, b) => bits.get(a) == bits.get(b),
            };
            bits.set(i, v);
        }
        bits
    }
}

/// An undischarged false box: world `world` needs an R_k successor where
/// the body is false.
#[derive(Debug, Clone, Copy)]
struct Obligation {
    world: u8,
    k: u32,
    bx: u16,
    body: u16,
}

struct Snapshot {
    worlds: usize,
    obligations: usize,
    rel: Vec<Vec<u16>>,
}

struct State<'a> {
    clo: &'a Closure,
    cap: usize,
    budget: u64,
    labels: Vec<Bits>,
    /// rel[k][x] is the successor set of world x at modality k, as a bitmask.
    rel: Vec<Vec<u16>>,
    /// Append-only along a branch; sorted by (world, modality, box index)
    /// because worlds are appended in creation order with their boxes
    /// pre-sorted.
    obligations: Vec<Obligation>,
}

fn mask_iter(mut mask: u16) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl<'a> State<'a> {
    fn new(clo: &'a Closure, cap: usize, budget: u64) -> State<'a> {
        State {
            clo,
            cap,
            budget,
            labels: Vec::new(),
            rel: vec![Vec::new(); clo.modality_count as usize],
            obligations: Vec::new(),
        }
    }

    fn spend(&mut self) -> Result<(), EngineError> {
        if self.budget == 0 {
            return Err(EngineError::BudgetExhausted);
        }
        self.budget -= 1;
        Ok(())
    }

    fn push_world(&mut self, bits: Bits) -> usize {
        let w = self.labels.len();
        self.labels.push(bits);
        for rows in &mut self.rel {
            rows.push(0);
        }
        for b in &self.clo.boxes {
            if !bits.get(b.idx) {
                self.obligations.push(Obligation {
                    world: w as u8,
                    k: b.k,
                    bx: b.idx,
                    body: b.body,
                });
            }
        }
        w
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot {
            worlds: self.labels.len(),
            obligations: self.obligations.len(),
            rel: self.rel.clone(),
        }
    }

    fn restore(&mut self, snap: Snapshot) {
        self.labels.truncate(snap.worlds);
        self.obligations.truncate(snap.obligations);
        self.rel = snap.rel;
    }

    /// Adds an edge and closes the relations under transitivity and the
    /// mixed-modality conditions. Returns false (leaving partial edits in
    /// place; the caller restores a snapshot) if closing hits a reflexive
    /// edge or an edge whose target contradicts a true box of its source.
    fn add_edge_closed(&mut self, a: usize, k: u32, b: usize) -> Result<bool, EngineError> {
        let count = self.clo.modality_count;
        let mut worklist = vec![(a, k, b)];
        while let Some((a, m, b)) = worklist.pop() {
            self.spend()?;
            if a == b {
                return Ok(false);
            }
            if self.rel[m as usize][a] & (1 << b) != 0 {
                continue;
            }
            // A true [m]ξ at the source forces ξ (and, by transitivity,
            // [m]ξ) true at the target; an edge at modality m forces all
            // lower boxes to agree, since lower successor sets are shared.
            for bn in &self.clo.by_modality[m as usize] {
                if self.labels[a].get(bn.idx)
                    && !(self.labels[b].get(bn.body) && self.labels[b].get(bn.idx))
                {
                    return Ok(false);
                }
            }
            for lower in 0..m {
                for bn in &self.clo.by_modality[lower as usize] {
                    if self.labels[a].get(bn.idx) != self.labels[b].get(bn.idx) {
                        return Ok(false);
                    }
                }
            }
            self.rel[m as usize][a] |= 1 << b;

            for c in mask_iter(self.rel[m as usize][b]) {
                worklist.push((a, m, c));
            }
            for w in 0..self.labels.len() {
                if self.rel[m as usize][w] & (1 << a) != 0 {
                    worklist.push((w, m, b));
                }
            }
            // The new edge as the higher edge: successor sets below m are
            // shared between a and b, and predecessors of a below m reach b.
            for lower in 0..m {
                for c in mask_iter(self.rel[lower as usize][a]) {
                    worklist.push((b, lower, c));
                }
                for c in mask_iter(self.rel[lower as usize][b]) {
                    worklist.push((a, lower, c));
                }
                for u in 0..self.labels.len() {
                    if self.rel[lower as usize][u] & (1 << a) != 0 {
                        worklist.push((u, lower, b));
                    }
                }
            }
            // The new edge as the lower edge: b joins the m-successors of
            // every world tied to a by a higher edge, and a inherits the
            // higher-modality successors of b.
            for higher in m + 1..count {
                for v in mask_iter(self.rel[higher as usize][a]) {
                    worklist.push((v, m, b));
                }
                for u in 0..self.labels.len() {
                    if self.rel[higher as usize][u] & (1 << a) != 0 {
                        worklist.push((u, m, b));
                    }
                }
                for z in mask_iter(self.rel[higher as usize][b]) {
                    worklist.push((a, m, z));
                }
            }
        }
        Ok(true)
    }

    /// Atom assignment constraints for a fresh witness of `o`: lower
    /// boxes copy the parent, true parent boxes at the same modality and
    /// the failed box itself are forced true, everything else is free.
    fn forced_for(&self, o: Obligation) -> (u64, Vec<u8>) {
        let x = o.world as usize;
        let mut forced = 0u64;
        let mut free = Vec::new();
        for (pos, &idx) in self.clo.atoms.iter().enumerate() {
            match self.clo.nodes[idx as usize] {
                Node::Box(m, _) if m < o.k => {
                    if self.labels[x].get(idx) {
                        forced |= 1 << pos;
                    }
                }
                Node::Box(m, _) if m == o.k => {
                    if self.labels[x].get(idx) || idx == o.bx {
                        forced |= 1 << pos;
                    } else {
                        free.push(pos as u8);
                    }
                }
                _ => free.push(pos as u8),
            }
        }
        (forced, free)
    }

    fn dfs(&mut self, mut ptr: usize) -> Result<bool, EngineError> {
        while ptr < self.obligations.len() {
            let o = self.obligations[ptr];
            let succ = self.rel[o.k as usize][o.world as usize];
            if mask_iter(succ).any(|y| !self.labels[y].get(o.body)) {
                ptr += 1;
                continue;
            }
            break;
        }
        if ptr == self.obligations.len() {
            return Ok(true);
        }
        let o = self.obligations[ptr];

        for y in 0..self.labels.len() {
            if !self.labels[y].get(o.body) && self.labels[y].get(o.bx) {
                self.spend()?;
                let snap = self.snapshot();
                if self.add_edge_closed(o.world as usize, o.k, y)? && self.dfs(ptr + 1)? {
                    return Ok(true);
                }
                self.restore(snap);
            }
        }

        if self.labels.len() < self.cap {
            let (forced, free) = self.forced_for(o);
            for combo in 0u128..1 << free.len() {
                self.spend()?;
                let mut mask = forced;
                for (bit, &pos) in free.iter().enumerate() {
                    if combo >> bit & 1 == 1 {
                        mask |= 1 << pos;
                    }
                }
                let bits = self.clo.derive(mask);
                if bits.get(o.body) {
                    continue;
                }
                let snap = self.snapshot();
                let y = self.push_world(bits);
                if self.add_edge_closed(o.world as usize, o.k, y)? && self.dfs(ptr + 1)? {
                    return Ok(true);
                }
                self.restore(snap);
            }
        }
        Ok(false)
    }

    fn certificate(&self, query: &Formula) -> Result<Verdict, EngineError> {
        let names: Vec<String> = (0..self.labels.len()).map(|i| format!("w{i}")).collect();
        let mut edges = Vec::new();
        for (k, rows) in self.rel.iter().enumerate() {
            for (x, &mask) in rows.iter().enumerate() {
                for y in mask_iter(mask) {
                    edges.push((k as u32, names[x].clone(), names[y].clone()));
                }
            }
        }
        let mut valuation = Vec::new();
        for &idx in &self.clo.atoms {
            if let Node::Var(v) = self.clo.nodes[idx as usize] {
                for (x, label) in self.labels.iter().enumerate() {
                    if label.get(idx) {
                        valuation.push((v, names[x].clone()));
                    }
                }
            }
        }
        let model = KripkeModel::new(names, self.clo.modality_count, edges, valuation)
            .map_err(|e| EngineError::CertificateCheck(e.to_string()))?;
        let report = model.is_j_frame();
        if !report.ok {
            return Err(EngineError::CertificateCheck(format!(
                "frame condition {} violated",
                report.violations[0].condition
            )));
        }
        if model.find_root() != Some("w0") {
            return Err(EngineError::CertificateCheck(
                "constructed model is not rooted at w0".into(),
            ));
        }
        match model.satisfies("w0", query) {
            Ok(false) => {}
            Ok(true) => {
                return Err(EngineError::CertificateCheck(
                    "query is not refuted at the root".into(),
                ))
            }
            Err(e) => return Err(EngineError::CertificateCheck(e.to_string())),
        }
        Ok(Verdict::Invalid {
            countermodel: model,
            refuted_at: "w0".into(),
        })
    }
}

pub(super) fn decide(query: &Formula, cfg: &EngineConfig) -> Result<Verdict, EngineError> {
    let normalized = query.box_normal();
    let clo = Closure::build(&normalized)?;
    let mut budget = cfg.node_budget;

    // Candidate root labels: every atom assignment falsifying the query.
    let mut roots = Vec::new();
    for mask in 0u128..1 << clo.atoms.len() {
        if budget == 0 {
            return Err(EngineError::BudgetExhausted);
        }
        budget -= 1;
        if !clo.derive(mask as u64).get(0) {
            roots.push(mask as u64);
        }
    }
    if roots.is_empty() {
        return Ok(Verdict::NoCountermodelWithinCap {
            cap: cfg.max_worlds,
        });
    }

    for size in 1..=cfg.max_worlds {
        for &mask in &roots {
            let mut state = State::new(&clo, size, budget);
            state.push_world(clo.derive(mask));
            let found = state.dfs(0);
            budget = state.budget;
            if found? {
                return state.certificate(query);
            }
        }
    }
    Ok(Verdict::NoCountermodelWithinCap {
        cap: cfg.max_worlds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::decide_j;
    use crate::semantics::gen::{random_formula, random_rooted_j_model};
    use crate::syntax::parse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closure_orders_children_before_parents() {
        let f = parse("p0 & (p0 & p1)", 1).unwrap();
        let clo = Closure::build(&f).unwrap();
        let all_true = clo.derive(u64::MAX);
        assert!(all_true.get(0));
        let none = clo.derive(0);
        assert!(!none.get(0));
    }

    #[test]
    fn derive_matches_model_truth_on_random_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let f = random_formula(&mut rng, 3, 3, 2).box_normal();
            let m = random_rooted_j_model(&mut rng, 4, 2, 3);
            let clo = Closure::build(&f).unwrap();
            // Labels with correct atom bits for world w0 must derive the
            // model's actual truth for every closure formula.
            let subs = f.subformulas();
            let mut mask = 0u64;
            for (pos, &idx) in clo.atoms.iter().enumerate() {
                if m.satisfies("w0", &subs[idx as usize]).unwrap() {
                    mask |= 1 << pos;
                }
            }
            let bits = clo.derive(mask);
            for (i, sub) in subs.iter().enumerate() {
                assert_eq!(bits.get(i as u16), m.satisfies("w0", sub).unwrap(), "{f} / {sub}");
            }
        }
    }

    #[test]
    fn axiom_schemas_have_no_countermodels() {
        let cfg = EngineConfig::default();
        for text in [
            "[1]([1]p0 -> p0) -> [1]p0",
            "[0](p0 -> p1) -> [0]p0 -> [0]p1",
            "~[0]~p0 -> [2]~[0]~p0",
            "[0]p0 -> [1][0]p0",
            "[0]p0 -> [0][1]p0",
        ] {
            let f = parse(text, 4).unwrap();
            assert!(!decide_j(&f, &cfg).unwrap().is_invalid(), "{text}");
        }
    }

    #[test]
    fn found_countermodels_are_small_and_certified() {
        let cfg = EngineConfig::default();
        for (text, worlds) in [
            ("p0", 1),
            ("[0]F", 2),
            ("[0]p0 -> [1]p0", 2),
            ("[1]p0 -> [0]p0", 2),
            ("[0]p0 -> [0][0]F", 3),
        ] {
            let f = parse(text, 2).unwrap();
            match decide_j(&f, &cfg).unwrap() {
                Verdict::Invalid { countermodel, .. } => {
                    assert_eq!(countermodel.worlds().len(), worlds, "{text}");
                }
                Verdict::NoCountermodelWithinCap { .. } => panic!("{text} should be refutable"),
            }
        }
    }
}
