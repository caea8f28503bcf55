use circuitkit::circuits::{is_circuit, validate_walk, WalkTrace};
use circuitkit::coloring::{
    char_vector, coloring_system, difference_is_circuit, difference_vector, feasible_01_circuits_at, proper_colorings,
    two_step_construction, Coloring,
};
use circuitkit::graph::Graph;
use circuitkit::ratmat::Rational;
use proptest::prelude::*;

fn graph(n: usize, mask: u64) -> Graph {
    Graph::from_pair_mask(n, mask & ((1 << (n * (n - 1) / 2)) - 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn connectivity_test_matches_oracle(n in 1usize..=5, mask in any::<u64>(), palette in 2usize..=4, i in any::<usize>(), j in any::<usize>()) {
        let g = graph(n, mask);
        let cs = proper_colorings(&g, palette);
        prop_assume!(cs.len() >= 2);
        let (a, b) = (&cs[i % cs.len()], &cs[j % cs.len()]);
        prop_assume!(a != b);
        let (connected, _) = difference_is_circuit(&g, a, b).unwrap();
        let oracle = is_circuit(&coloring_system(&g, palette), &difference_vector(a, b)).unwrap();
        prop_assert_eq!(connected, oracle.is_circuit());
    }

    #[test]
    fn zero_one_steps_land_on_proper_colorings(n in 1usize..=5, mask in any::<u64>(), i in any::<usize>()) {
        let g = graph(n, mask);
        let cs = proper_colorings(&g, 3);
        prop_assume!(!cs.is_empty());
        let c = &cs[i % cs.len()];
        let sys = coloring_system(&g, 3);
        for s in feasible_01_circuits_at(&g, c, 8).unwrap() {
            prop_assert!(s.target.is_proper(&g));
            let mut t = WalkTrace::empty(char_vector(c));
            t.push(s.vector.clone(), Rational::one());
            prop_assert!(validate_walk(&sys, &t).is_ok());
            prop_assert_eq!(t.end(), &char_vector(&s.target));
        }
    }

    #[test]
    fn complete_graphs_need_at_most_two_steps(n in 3usize..=5, seed1 in any::<u64>(), seed2 in any::<u64>()) {
        let perm = |seed: u64| {
            let mut v: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for k in (1..n).rev() {
                v.swap(k, (s % (k as u64 + 1)) as usize);
                s /= k as u64 + 1;
            }
            Coloring::new(v, n).unwrap()
        };
        let (a, b) = (perm(seed1), perm(seed2));
        prop_assume!(a != b);
        let g = Graph::complete(n);
        let t = two_step_construction(&g, &a, &b).unwrap();
        prop_assert!(t.len() <= 2);
        prop_assert!(validate_walk(&coloring_system(&g, n), &t).is_ok());
        prop_assert_eq!(t.end(), &char_vector(&b));
    }
}
