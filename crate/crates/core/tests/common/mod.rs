#![allow(dead_code)]

use circuitkit::circuits::ConstraintSystem;
use circuitkit::ratmat::{rank, RatMatrix, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded system with `n <= 6` variables, `m_B <= 12` rows, small integer entries and no lineality.
pub fn random_system(seed: u64) -> ConstraintSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(2..=6);
        let m_b = rng.gen_range(n..=12);
        let m_a = if n >= 3 { rng.gen_range(0..=1) } else { 0 };
        let row = |rng: &mut ChaCha8Rng| -> Vec<i64> { (0..n).map(|_| rng.gen_range(-2..=2)).collect() };
        let eq: Vec<(Vec<i64>, i64)> = (0..m_a).map(|_| (row(&mut rng), 0)).collect();
        let ineq: Vec<(Vec<i64>, i64)> = (0..m_b).map(|_| (row(&mut rng), 1)).collect();
        let all: Vec<Vec<Rational>> =
            eq.iter().chain(&ineq).map(|(r, _)| r.iter().map(|&x| Rational::from_int(x)).collect()).collect();
        if rank(&RatMatrix::from_rows(n, all)) == n {
            return ConstraintSystem::from_i64(n, &eq, &ineq);
        }
    }
}
