//! Structural laws: grammar round-trips, diamond elimination, the
//! substitution algebra, and the engine's reduction/cap contracts.

use glp_core::engine::{decide_glp, decide_j, m_plus, EngineConfig};
use glp_core::semantics::gen::{random_formula, random_rooted_j_model};
use glp_core::syntax::{parse, Formula, Substitution};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn formula_strategy(modality_count: u32, var_count: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (0..var_count).prop_map(Formula::Var),
        Just(Formula::Bot),
        Just(Formula::Top),
    ];
    leaf.prop_recursive(6, 48, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (0..modality_count, inner.clone()).prop_map(|(k, f)| Formula::bx(k, f)),
            (0..modality_count, inner).prop_map(|(k, f)| Formula::dia(k, f)),
        ]
    })
}

fn substitution_strategy() -> impl Strategy<Value = Substitution> {
    proptest::collection::vec((0..3u32, formula_strategy(2, 3)), 0..3).prop_map(|bindings| {
        let mut sigma = Substitution::identity();
        for (v, f) in bindings {
            sigma.bind(v, f);
        }
        sigma
    })
}

proptest! {
    #[test]
    fn printing_then_parsing_is_identity(f in formula_strategy(3, 3)) {
        let printed = f.to_string();
        let reparsed = parse(&printed, 3).expect("printed formulas parse");
        prop_assert_eq!(reparsed, f);
    }

    #[test]
    fn box_normal_is_semantically_transparent(
        f in formula_strategy(2, 3),
        seed in any::<u64>(),
        size in 1usize..6,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_rooted_j_model(&mut rng, size, 2, 3);
        let normal = f.box_normal();
        for world in model.worlds() {
            prop_assert_eq!(
                model.satisfies(world, &f).unwrap(),
                model.satisfies(world, &normal).unwrap(),
                "world {}", world
            );
        }
    }

    #[test]
    fn substitution_distributes_over_constructors(
        sigma in substitution_strategy(),
        a in formula_strategy(2, 3),
        b in formula_strategy(2, 3),
        k in 0..2u32,
    ) {
        let (sa, sb) = (sigma.apply(&a), sigma.apply(&b));
        prop_assert_eq!(sigma.apply(&Formula::not(a.clone())), Formula::not(sa.clone()));
        prop_assert_eq!(
            sigma.apply(&Formula::and(a.clone(), b.clone())),
            Formula::and(sa.clone(), sb.clone())
        );
        prop_assert_eq!(
            sigma.apply(&Formula::or(a.clone(), b.clone())),
            Formula::or(sa.clone(), sb.clone())
        );
        prop_assert_eq!(
            sigma.apply(&Formula::implies(a.clone(), b.clone())),
            Formula::implies(sa.clone(), sb.clone())
        );
        prop_assert_eq!(
            sigma.apply(&Formula::iff(a.clone(), b.clone())),
            Formula::iff(sa.clone(), sb.clone())
        );
        prop_assert_eq!(sigma.apply(&Formula::bx(k, a.clone())), Formula::bx(k, sa.clone()));
        prop_assert_eq!(sigma.apply(&Formula::dia(k, a)), Formula::dia(k, sa));
    }

    #[test]
    fn composition_laws_hold_extensionally(
        outer in substitution_strategy(),
        middle in substitution_strategy(),
        inner in substitution_strategy(),
        f in formula_strategy(2, 3),
    ) {
        let id = Substitution::identity();
        prop_assert_eq!(
            Substitution::compose(&outer, &inner).apply(&f),
            outer.apply(&inner.apply(&f)),
            "composition must act like sequential application"
        );
        prop_assert_eq!(Substitution::compose(&outer, &id).apply(&f), outer.apply(&f));
        prop_assert_eq!(Substitution::compose(&id, &outer).apply(&f), outer.apply(&f));
        prop_assert_eq!(
            Substitution::compose(&Substitution::compose(&outer, &middle), &inner).apply(&f),
            Substitution::compose(&outer, &Substitution::compose(&middle, &inner)).apply(&f)
        );
    }
}

/// The GLP decision is literally the J decision of the translated
/// implication, certificate and all.
#[test]
fn glp_decisions_equal_their_j_reductions() {
    let cfg = EngineConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b9);
    for _ in 0..25 {
        let f = random_formula(&mut rng, 3, 2, 2);
        let direct = decide_glp(&f, &cfg).unwrap();
        let reduced = decide_j(&Formula::implies(m_plus(&f), f.clone()), &cfg).unwrap();
        assert_eq!(direct, reduced, "query {f}");
    }
}

/// A countermodel found under a small cap must persist under larger
/// caps, and deterministic search must return the same certificate.
#[test]
fn countermodels_survive_cap_increases() {
    let cfg_small = EngineConfig {
        max_worlds: 4,
        ..EngineConfig::default()
    };
    let cfg_large = EngineConfig {
        max_worlds: 7,
        ..EngineConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut hits = 0;
    for _ in 0..40 {
        let f = random_formula(&mut rng, 3, 2, 2);
        let small = decide_j(&f, &cfg_small).unwrap();
        if small.is_invalid() {
            hits += 1;
            let large = decide_j(&f, &cfg_large).unwrap();
            assert_eq!(small, large, "query {f}");
        }
    }
    assert!(hits >= 10, "corpus too tame: only {hits} refutations");
}
