//! 0/±1 vectors on the rank system: recognized shapes, balanced sets and drop witnesses.

use circuitkit::forest::{balanced_sets, classify_01, structure_recognizer, Classification, SignedEdgeVector};
use circuitkit::graph::Graph;

fn main() {
    let cases = [
        ("alternating P5", Graph::path(5), vec![1, -1, 1, -1]),
        ("rooted C5", Graph::cycle(5), vec![1, -1, 1, -1, 1]),
        ("rooted C3", Graph::cycle(3), vec![1, -1, 1]),
        ("+--- path", Graph::path(5), vec![1, -1, -1, -1]),
        ("pseudo P9", Graph::path(9), vec![1, 1, -1, -1, 1, 1, -1, -1]),
    ];
    for (name, g, signs) in cases {
        let x = SignedEdgeVector::from_signs(&signs);
        let kind = structure_recognizer(&g, &x);
        match classify_01(&g, &x).expect("within the vertex cap") {
            Classification::IsCircuit => println!("{name}: circuit, shape {kind:?}"),
            Classification::NonCircuit { witness, .. } => println!("{name}: not a circuit, drop {:?}", witness.kind),
        }
    }
    let g = Graph::path(3);
    let r = balanced_sets(&g, &SignedEdgeVector::from_signs(&[1, 1])).expect("small");
    println!("uniform 2-edge path: edges in a balanced set {:?}", r.edge_in_some_balanced_set);
}
