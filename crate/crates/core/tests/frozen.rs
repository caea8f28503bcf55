//! Values computed once by the brute-force oracles and frozen here.

use circuitkit::circuits::{exhaustive_imbalance, is_circuit, EnumerationOptions};
use circuitkit::cli::{run_claim, sweep_01, Caps, ClaimId, Params};
use circuitkit::coloring::{reconfiguration_graph, Adjacency};
use circuitkit::forest::rank_system;
use circuitkit::gadgets::{gadget, GadgetKind};
use circuitkit::graph::{graphs_up_to_isomorphism, Graph};
use circuitkit::ratmat::Rational;

fn summary(id: ClaimId, params: &[(&str, &str)]) -> serde_json::Value {
    let p = params.iter().fold(Params::new(), |p, (k, v)| p.with(k, v));
    run_claim(id, &p, &Caps::default()).unwrap().evidence["summary"].clone()
}

#[test]
fn gadget_imbalances() {
    let expected = [
        (GadgetKind::Thm21, 1, 1),
        (GadgetKind::Thm22, 1, 1),
        (GadgetKind::Thm22, 2, 2),
        (GadgetKind::Thm23, 1, 2),
        (GadgetKind::Thm23, 2, 7),
        (GadgetKind::Thm24, 1, 2),
        (GadgetKind::Thm24, 2, 4),
    ];
    for (kind, k, kappa) in expected {
        let inst = gadget(kind, k).unwrap();
        let (rep, _) = exhaustive_imbalance(&inst.system, &EnumerationOptions::default(), None).unwrap();
        assert_eq!(rep.kappa, Rational::from_int(kappa), "{kind:?} k={k}");
    }
}

#[test]
fn small_sweep_counts_match_the_generic_oracle() {
    let s = sweep_01(4, 4).unwrap();
    assert_eq!(
        (s.graphs, s.vectors, s.circuits, s.non_circuits, s.case1, s.case2, s.neither),
        (17, 664, 246, 418, 330, 88, 0)
    );
    let mut circuits = 0;
    for g in (2..=4).flat_map(graphs_up_to_isomorphism) {
        let sys = rank_system(&g).unwrap();
        let m = g.edge_count();
        for code in 0..3usize.pow(m as u32) {
            let signs: Vec<i64> = (0..m).map(|e| (code / 3usize.pow(e as u32) % 3) as i64 - 1).collect();
            let supp = signs.iter().filter(|&&v| v != 0).count();
            if !(2..=4).contains(&supp) || !signs.contains(&1) || !signs.contains(&-1) {
                continue;
            }
            let x: Vec<Rational> = signs.iter().map(|&v| Rational::from_int(v)).collect();
            circuits += is_circuit(&sys, &x).unwrap().is_circuit() as usize;
        }
    }
    assert_eq!(circuits, s.circuits);
}

#[test]
fn claim_summaries() {
    let s = summary(ClaimId::NotACircuit, &[("n", "5"), ("max-supp", "4")]);
    assert_eq!(
        (s["mixed_vectors"].as_u64(), s["case1"].as_u64(), s["case2"].as_u64()),
        (Some(15878), Some(7300), Some(2012))
    );
    let s = summary(ClaimId::UnitVector, &[("n", "4")]);
    assert_eq!((s["uniform_vectors"].as_u64(), s["circuits"].as_u64()), (Some(328), Some(80)));
    let s = summary(ClaimId::SingleDrop, &[("n", "4")]);
    assert_eq!((s["support_edges"].as_u64(), s["droppable"].as_u64()), (Some(2832), Some(1244)));
    let s = summary(ClaimId::Colcir, &[]);
    assert_eq!((s["pairs"].as_u64(), s["circuits"].as_u64()), (Some(885), Some(753)));
    let s = summary(ClaimId::Zigzag, &[]);
    assert_eq!((s["zero_one_walk_steps"].as_u64(), s["unrestricted_walk_steps"].as_u64()), (Some(8), Some(1)));
    let s = summary(ClaimId::Lb3, &[]);
    assert_eq!((s["circuits"].as_u64(), s["explored_states"].as_u64()), (Some(72), Some(22)));
}

#[test]
fn prism_reconfiguration_graphs() {
    let prism = Graph::triangular_prism();
    let kempe = reconfiguration_graph(&prism, 3, Adjacency::Kempe, 8).unwrap();
    let circ = reconfiguration_graph(&prism, 3, Adjacency::Circuit, 8).unwrap();
    assert_eq!((kempe.nodes.len(), kempe.edges.len(), kempe.component_count()), (12, 18, 2));
    assert_eq!((circ.edges.len(), circ.component_count()), (66, 1));
}
