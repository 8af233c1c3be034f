//! Canonical enumeration of closed formulas for the ground-unifier
//! search, plus the one-world evaluation used to prune candidates.

use crate::syntax::Formula;
use std::collections::BTreeMap;

/// Closed formulas grouped by AST size, generated on demand in a fixed
/// canonical order: within each size, negations first, then the binary
/// connectives ∧, ∨, →, ↔ (operand pairs ordered by left size, then by
/// each operand's own position), then boxes and diamonds by ascending
/// modality. Size 1 is ⊥ then ⊤. The order makes search results
/// reproducible: the first unifier found is the canonically least one.
pub(super) struct ClosedPool {
    modality_count: u32,
    by_size: Vec<Vec<Formula>>,
}

const BINARY: [fn(Formula, Formula) -> Formula; 4] = [
    Formula::and,
    Formula::or,
    Formula::implies,
    Formula::iff,
];

impl ClosedPool {
    pub(super) fn new(modality_count: u32) -> Self {
        ClosedPool {
            modality_count,
            by_size: vec![vec![Formula::Bot, Formula::Top]],
        }
    }

    /// Number of closed formulas of exactly `size` nodes, generating that
    /// size level if it has not been reached yet.
    pub(super) fn ensure(&mut self, size: usize) -> usize {
        while self.by_size.len() < size {
            self.grow();
        }
        self.by_size[size - 1].len()
    }

    pub(super) fn get(&self, size: usize, index: usize) -> &Formula {
        &self.by_size[size - 1][index]
    }

    fn grow(&mut self) {
        let size = self.by_size.len() + 1;
        let mut out = Vec::new();
        for f in &self.by_size[size - 2] {
            out.push(Formula::not(f.clone()));
        }
        for op in BINARY {
            for left in 1..size.saturating_sub(1) {
                let right = size - 1 - left;
                for a in &self.by_size[left - 1] {
                    for b in &self.by_size[right - 1] {
                        out.push(op(a.clone(), b.clone()));
                    }
                }
            }
        }
        for k in 0..self.modality_count {
            for f in &self.by_size[size - 2] {
                out.push(Formula::bx(k, f.clone()));
            }
        }
        for k in 0..self.modality_count {
            for f in &self.by_size[size - 2] {
                out.push(Formula::dia(k, f.clone()));
            }
        }
        self.by_size.push(out);
    }
}

/// Truth value at the single world of the edgeless one-world model, where
/// every box is true and every diamond false. Variables read from
/// `assign`; a missing variable means the formula was expected closed.
pub(super) fn one_point_value(f: &Formula, assign: &BTreeMap<u32, bool>) -> bool {
    match f {
        Formula::Var(v) => *assign
            .get(v)
            .unwrap_or_else(|| panic!("unassigned variable p{v}")),
        Formula::Bot => false,
        Formula::Top => true,
        Formula::Not(a) => !one_point_value(a, assign),
        Formula::And(a, b) => one_point_value(a, assign) && one_point_value(b, assign),
        Formula::Or(a, b) => one_point_value(a, assign) || one_point_value(b, assign),
        Formula::Implies(a, b) => !one_point_value(a, assign) || one_point_value(b, assign),
        Formula::Iff(a, b) => one_point_value(a, assign) == one_point_value(b, assign),
        Formula::Box(..) => true,
        Formula::Dia(..) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn enumeration_starts_in_canonical_order() {
        let mut pool = ClosedPool::new(1);
        assert_eq!(pool.ensure(1), 2);
        assert_eq!(pool.get(1, 0), &Formula::Bot);
        assert_eq!(pool.get(1, 1), &Formula::Top);

        assert_eq!(pool.ensure(2), 6);
        let expected = ["~F", "~T", "[0]F", "[0]T", "<0>F", "<0>T"];
        for (i, text) in expected.iter().enumerate() {
            assert_eq!(pool.get(2, i), &parse(text, 1).unwrap(), "index {i}");
        }

        let mut level3 = Vec::new();
        for i in 0..pool.ensure(3) {
            level3.push(pool.get(3, i).to_string());
        }
        assert_eq!(&level3[..4], ["~~F", "~~T", "~[0]F", "~[0]T"]);
        let and_start = level3.iter().position(|s| s == "F & F").unwrap();
        let or_start = level3.iter().position(|s| s == "F | F").unwrap();
        assert!(and_start < or_start);
        assert!(level3.iter().all(|s| !s.contains('p')));
    }

    #[test]
    fn level_sizes_match_direct_counts() {
        let mut pool = ClosedPool::new(2);
        // c(1)=2, c(2)=2+4*2=10, c(3)=5*10+4*2*2=66.
        assert_eq!(pool.ensure(1), 2);
        assert_eq!(pool.ensure(2), 10);
        assert_eq!(pool.ensure(3), 66);
        for i in 0..66 {
            assert_eq!(pool.get(3, i).size(), 3);
        }
    }

    #[test]
    fn one_point_value_examples() {
        let assign = BTreeMap::from([(0, true), (1, false)]);
        let cases = [
            ("p0 -> [0]F", true),
            ("p1 | <1>T", false),
            ("[2](p0 & p1)", true),
            ("~[0]p1 <-> F", true),
        ];
        for (text, expected) in cases {
            let f = parse(text, 3).unwrap();
            assert_eq!(one_point_value(&f, &assign), expected, "{text}");
        }
    }
}
