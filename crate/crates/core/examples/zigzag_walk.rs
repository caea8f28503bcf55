//! The zig-zag quadrilateral: 0/1 circuits alone force a long walk.

use circuitkit::circuits::{enumerate_circuits, validate_walk, walk_bfs, EnumerationOptions, WalkOptions};
use circuitkit::gadgets::{zigzag_system, ZigzagParams};
use circuitkit::ratmat::Rational;

fn main() {
    for (m, eps) in [(2, 1), (3, 1), (4, 1)] {
        let p = ZigzagParams::new(Rational::from_int(m), Rational::from_int(eps)).expect("0 < eps <= M");
        let (sys, vertices) = zigzag_system(&p).expect("valid parameters");
        let all = enumerate_circuits(&sys, &EnumerationOptions::default()).expect("two variables");
        let zero_one: Vec<_> = all.iter().filter(|c| c.is_01()).cloned().collect();
        let opts = WalkOptions { depth_cap: 20, ..Default::default() };
        let slow = walk_bfs(&sys, &vertices[0], &p.target(), &zero_one, &opts).expect("reachable");
        let fast = walk_bfs(&sys, &vertices[0], &p.target(), &all, &opts).expect("reachable");
        assert!(validate_walk(&sys, &slow).is_ok() && validate_walk(&sys, &fast).is_ok());
        println!("M={m} eps={eps}: 0/1 circuits need {} steps, all circuits need {}", slow.len(), fast.len());
    }
}
