use circuitkit::circuits::{is_circuit, strictly_smaller_support, validate_walk};
use circuitkit::cli::random_forest;
use circuitkit::forest::{
    balanced_sets, classify_01, mwf_system, rank_system, structure_recognizer, walk_forest_to_forest,
    walk_zero_to_forest, Classification, Route, SignedEdgeVector, StructureKind,
};
use circuitkit::graph::Graph;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph(n: usize, mask: u64) -> Graph {
    Graph::from_pair_mask(n, mask & ((1 << (n * (n - 1) / 2)) - 1))
}

fn vector(g: &Graph, signs: &[i64]) -> SignedEdgeVector {
    SignedEdgeVector::from_signs(&signs[..g.edge_count()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forest_walks_are_valid_and_short(n in 2usize..=6, mask in any::<u64>(), seed in any::<u64>()) {
        let g = graph(n, mask);
        let sys = mwf_system(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f1, f2) = (random_forest(&g, &mut rng), random_forest(&g, &mut rng));
        prop_assert!(g.is_forest(&f1) && g.is_forest(&f2));
        let t = walk_forest_to_forest(&g, &f1, &f2, Route::General).unwrap();
        prop_assert!(t.len() <= 9);
        prop_assert!(validate_walk(&sys, &t).is_ok());
        let z = walk_zero_to_forest(&g, &f2).unwrap();
        prop_assert!(validate_walk(&sys, &z).is_ok());
    }

    #[test]
    fn complete_route_stays_within_seven(n in 5usize..=6, seed in any::<u64>()) {
        let g = Graph::complete(n);
        let sys = mwf_system(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f1, f2) = (random_forest(&g, &mut rng), random_forest(&g, &mut rng));
        let t = walk_forest_to_forest(&g, &f1, &f2, Route::Complete).unwrap();
        prop_assert!(t.len() <= 7);
        prop_assert!(validate_walk(&sys, &t).is_ok());
    }

    #[test]
    fn recognized_shapes_are_circuits(n in 2usize..=7, mask in any::<u64>(), signs in prop::collection::vec(-1i64..=1, 21)) {
        let g = graph(n, mask);
        let x = vector(&g, &signs);
        prop_assume!(!x.is_zero());
        let kind = structure_recognizer(&g, &x);
        prop_assume!(kind != StructureKind::None);
        prop_assert!(is_circuit(&rank_system(&g).unwrap(), &x.values).unwrap().is_circuit(), "{:?}", kind);
    }

    #[test]
    fn classification_witnesses_shrink_support(n in 2usize..=6, mask in any::<u64>(), signs in prop::collection::vec(-1i64..=1, 15)) {
        let g = graph(n, mask);
        let x = vector(&g, &signs);
        prop_assume!(!x.is_zero());
        let sys = rank_system(&g).unwrap();
        match classify_01(&g, &x).unwrap() {
            Classification::IsCircuit => prop_assert!(is_circuit(&sys, &x.values).unwrap().is_circuit()),
            Classification::NonCircuit { witness, structure } => {
                prop_assert!(strictly_smaller_support(&sys, &witness.y.values, &x.values));
                if let Some(s) = structure {
                    prop_assert!(s.holds());
                }
            }
        }
    }

    #[test]
    fn edges_outside_balanced_sets_are_droppable(n in 2usize..=6, mask in any::<u64>(), signs in prop::collection::vec(-1i64..=1, 15)) {
        let g = graph(n, mask);
        let x = vector(&g, &signs);
        prop_assume!(x.support().len() >= 2);
        let sys = rank_system(&g).unwrap();
        let report = balanced_sets(&g, &x).unwrap();
        for (&e, &inside) in &report.edge_in_some_balanced_set {
            let mut y = x.values.clone();
            y[e] = circuitkit::ratmat::Rational::zero();
            prop_assert_eq!(strictly_smaller_support(&sys, &y, &x.values), !inside);
        }
    }
}

#[test]
fn pseudo_alternating_instances() {
    let p9 = Graph::path(9);
    let x = SignedEdgeVector::from_signs(&[1, 1, -1, -1, 1, 1, -1, -1]);
    assert_eq!(structure_recognizer(&p9, &x), StructureKind::PseudoAltPath);
    assert!(classify_01(&p9, &x).unwrap().is_circuit());
    let c10 = Graph::cycle(10);
    let y = SignedEdgeVector::from_signs(&[1, 1, -1, -1, -1, 1, 1, -1, -1, -1]);
    assert_eq!(structure_recognizer(&c10, &y), StructureKind::PseudoAltCycle);
    assert!(classify_01(&c10, &y).unwrap().is_circuit());
}
