//! Shortest walks through proper colorings of complete graphs.

use circuitkit::coloring::{proper_walk_bfs, two_step_construction, Coloring};
use circuitkit::graph::Graph;

fn main() {
    for n in 2..=3 {
        let g = Graph::complete(n);
        let from = Coloring::new((0..n).collect(), 2 * n).unwrap();
        let to = Coloring::new((n..2 * n).collect(), 2 * n).unwrap();
        let (dist, _) = proper_walk_bfs(&g, &from, &to, 8).expect("reachable");
        println!("K{n}, {} colors, disjoint color sets: {dist} steps", 2 * n);
    }
    let g = Graph::complete(4);
    let a = Coloring::new(vec![0, 1, 2, 3], 4).unwrap();
    let b = Coloring::new(vec![1, 0, 3, 2], 4).unwrap();
    let t = two_step_construction(&g, &a, &b).expect("proper colorings");
    println!("K4 permutation {:?} -> {:?}: {} steps", a.assignment, b.assignment, t.len());
}
