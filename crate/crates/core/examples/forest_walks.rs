//! Circuit walks between forests of K5 and the lower bound on K4.

use circuitkit::circuits::{validate_walk, EnumerationOptions};
use circuitkit::cli::random_forest;
use circuitkit::forest::{lower_bound_check, mwf_system, walk_forest_to_forest, Route};
use circuitkit::graph::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let k5 = Graph::complete(5);
    let sys = mwf_system(&k5).expect("five vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let (f1, f2) = (random_forest(&k5, &mut rng), random_forest(&k5, &mut rng));
        let general = walk_forest_to_forest(&k5, &f1, &f2, Route::General).unwrap();
        let complete = walk_forest_to_forest(&k5, &f1, &f2, Route::Complete).unwrap();
        assert!(validate_walk(&sys, &general).is_ok() && validate_walk(&sys, &complete).is_ok());
        println!("{f1:?} -> {f2:?}: general {} steps, complete {} steps", general.len(), complete.len());
    }
    let k4 = Graph::complete(4);
    let rep = lower_bound_check(&k4, &[0, 1, 2], &EnumerationOptions::default()).unwrap();
    println!("K4 star: {} states within two steps of 0, tree reached: {}", rep.explored_states, rep.reached_within_two);
}
