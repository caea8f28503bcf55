//! Differences of proper colorings: circuit exactly when the difference graph is connected.

use circuitkit::circuits::is_circuit;
use circuitkit::coloring::{coloring_system, difference_is_circuit, difference_vector, proper_colorings};
use circuitkit::graph::Graph;

fn main() {
    let g = Graph::cycle(4);
    let sys = coloring_system(&g, 3);
    let cs = proper_colorings(&g, 3);
    let (mut pairs, mut circuits, mut agree) = (0, 0, 0);
    for (i, a) in cs.iter().enumerate() {
        for b in &cs[i + 1..] {
            let (connected, _) = difference_is_circuit(&g, a, b).expect("proper and distinct");
            let oracle = is_circuit(&sys, &difference_vector(a, b)).expect("dimensions match").is_circuit();
            pairs += 1;
            circuits += oracle as usize;
            agree += (connected == oracle) as usize;
        }
    }
    println!(
        "C4 with 3 colors: {} colorings, {pairs} pairs, {circuits} circuit differences, {agree} agreements",
        cs.len()
    );
}
