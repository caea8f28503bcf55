//! Ordinary Kempe swaps against circuit steps on the triangular prism.

use circuitkit::coloring::{feasible_01_circuits_at, proper_colorings, reconfiguration_graph, Adjacency};
use circuitkit::graph::Graph;

fn main() {
    let prism = Graph::triangular_prism();
    for adj in [Adjacency::Kempe, Adjacency::Circuit] {
        let r = reconfiguration_graph(&prism, 3, adj, 8).expect("six vertices");
        println!("{adj:?}: {} colorings, {} edges, {} components", r.nodes.len(), r.edges.len(), r.component_count());
    }
    let c = &proper_colorings(&prism, 3)[0];
    let steps = feasible_01_circuits_at(&prism, c, 8).expect("six vertices");
    let multi: Vec<_> = steps.iter().filter(|s| !s.is_two_color()).collect();
    println!("from {:?}: {} circuit steps, {} use three colors", c.assignment, steps.len(), multi.len());
    if let Some(s) = multi.first() {
        println!(
            "  e.g. recolor {:?} to reach {:?} (swap conditions hold: {})",
            s.vertices, s.target.assignment, s.conditions_hold
        );
    }
}
