//! Random rooted J-models and random formulas for fuzzing.
//!
//! The generator builds frames that satisfy the J conditions by
//! construction: at each modality level the current world set is split
//! into clusters, a random rooted tree over the clusters is transitively
//! closed into that level's relation (relating all worlds of an ancestor
//! cluster to all worlds of a descendant cluster), and the construction
//! recurses inside each cluster at the next higher modality. Higher
//! modality edges therefore never leave a cluster, which gives successor
//! equality along them, and lower relations are uniform across clusters,
//! which gives the composition condition.

use super::KripkeModel;
use crate::syntax::Formula;
use rand::seq::SliceRandom;
use rand::Rng;

/// Generates a model whose frame satisfies all three J conditions and has
/// a root. Requires at least one world and one modality.
pub fn random_rooted_j_model<R: Rng>(
    rng: &mut R,
    world_count: usize,
    modality_count: u32,
    var_count: u32,
) -> KripkeModel {
    assert!(world_count >= 1, "need at least one world");
    assert!(modality_count >= 1, "need at least one modality");
    let mut edges: Vec<(u32, usize, usize)> = Vec::new();
    let worlds: Vec<usize> = (0..world_count).collect();
    grow(rng, &worlds, 0, modality_count, &mut edges);

    let names: Vec<String> = (0..world_count).map(|i| format!("w{i}")).collect();
    let edge_list = edges
        .into_iter()
        .map(|(k, x, y)| (k, names[x].clone(), names[y].clone()))
        .collect();
    let mut valuation = Vec::new();
    for v in 0..var_count {
        for name in &names {
            if rng.random::<bool>() {
                valuation.push((v, name.clone()));
            }
        }
    }
    KripkeModel::new(names, modality_count, edge_list, valuation).unwrap()
}

fn grow<R: Rng>(
    rng: &mut R,
    worlds: &[usize],
    k: u32,
    modality_count: u32,
    edges: &mut Vec<(u32, usize, usize)>,
) {
    if worlds.len() <= 1 || k == modality_count {
        return;
    }
    let parts = if k == modality_count - 1 {
        worlds.len()
    } else {
        rng.random_range(1..=worlds.len())
    };
    let clusters = split(rng, worlds, parts);

    let mut parent = vec![0usize; parts];
    for (i, p) in parent.iter_mut().enumerate().skip(1) {
        *p = rng.random_range(0..i);
    }
    for i in 1..parts {
        let mut a = parent[i];
        loop {
            for &x in &clusters[a] {
                for &y in &clusters[i] {
                    edges.push((k, x, y));
                }
            }
            if a == 0 {
                break;
            }
            a = parent[a];
        }
    }
    for cluster in &clusters {
        grow(rng, cluster, k + 1, modality_count, edges);
    }
}

fn split<R: Rng>(rng: &mut R, worlds: &[usize], parts: usize) -> Vec<Vec<usize>> {
    let mut shuffled = worlds.to_vec();
    shuffled.shuffle(rng);
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, worlds.len() - 1, parts - 1)
        .into_iter()
        .map(|c| c + 1)
        .collect();
    cuts.sort_unstable();
    cuts.push(worlds.len());
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for cut in cuts {
        out.push(shuffled[start..cut].to_vec());
        start = cut;
    }
    out
}

/// Returns a copy of `model` extended with a small gadget of fresh worlds
/// that violates exactly the requested frame condition (1, 2, or 3) and
/// nothing else. Panics on any other condition number.
pub fn inject_violation(model: &KripkeModel, condition: u8) -> KripkeModel {
    let mut names: Vec<String> = model.worlds().to_vec();
    let mut fresh = Vec::new();
    let mut i = names.len();
    while fresh.len() < 3 {
        let candidate = format!("w{i}");
        if model.world_index(&candidate).is_none() {
            fresh.push(candidate);
        }
        i += 1;
    }
    names.extend(fresh.iter().cloned());

    let count = model.modality_count();
    let mut edges: Vec<(u32, String, String)> = Vec::new();
    for k in 0..count {
        for (a, b) in model.relation_pairs(k) {
            edges.push((k, a.to_owned(), b.to_owned()));
        }
    }
    let (g1, g2, g3) = (&fresh[0], &fresh[1], &fresh[2]);
    let new_count = match condition {
        1 => {
            let top = count.saturating_sub(1);
            edges.push((top, g1.clone(), g1.clone()));
            count.max(top + 1)
        }
        2 => {
            edges.push((1, g1.clone(), g2.clone()));
            edges.push((0, g1.clone(), g3.clone()));
            count.max(2)
        }
        3 => {
            edges.push((0, g1.clone(), g2.clone()));
            edges.push((1, g2.clone(), g3.clone()));
            count.max(2)
        }
        other => panic!("no frame condition {other}"),
    };
    let valuation = model
        .valuation_entries()
        .into_iter()
        .map(|(v, w)| (v, w.to_owned()))
        .collect();
    KripkeModel::new(names, new_count, edges, valuation).unwrap()
}

/// Random formula of the given depth over `p0..p{var_count-1}` and
/// modalities `0..modality_count`.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    depth: u32,
    var_count: u32,
    modality_count: u32,
) -> Formula {
    let leaf = |rng: &mut R| match rng.random_range(0..6u8) {
        0 => Formula::Top,
        1 => Formula::Bot,
        _ if var_count > 0 => Formula::Var(rng.random_range(0..var_count)),
        _ => Formula::Top,
    };
    if depth == 0 {
        return leaf(rng);
    }
    let max_op = if modality_count > 0 { 8 } else { 6 };
    match rng.random_range(0..max_op as u8) {
        0 => leaf(rng),
        1 => Formula::not(random_formula(rng, depth - 1, var_count, modality_count)),
        2 => Formula::and(
            random_formula(rng, depth - 1, var_count, modality_count),
            random_formula(rng, depth - 1, var_count, modality_count),
        ),
        3 => Formula::or(
            random_formula(rng, depth - 1, var_count, modality_count),
            random_formula(rng, depth - 1, var_count, modality_count),
        ),
        4 => Formula::implies(
            random_formula(rng, depth - 1, var_count, modality_count),
            random_formula(rng, depth - 1, var_count, modality_count),
        ),
        5 => Formula::iff(
            random_formula(rng, depth - 1, var_count, modality_count),
            random_formula(rng, depth - 1, var_count, modality_count),
        ),
        6 => Formula::bx(
            rng.random_range(0..modality_count),
            random_formula(rng, depth - 1, var_count, modality_count),
        ),
        _ => Formula::dia(
            rng.random_range(0..modality_count),
            random_formula(rng, depth - 1, var_count, modality_count),
        ),
    }
}
