//! Exact kernels and unique solves over the rationals.

use circuitkit::ratmat::{kernel_basis, normalize_coprime, q, rank, solve_unique, RatMatrix, Rational};

fn main() {
    // b + c = a, b + d = a, c + d = a with a = 3
    let pairs = RatMatrix::from_i64_rows(3, &[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]);
    let sol = solve_unique(&pairs, &vec![Rational::from_int(3); 3]).expect("nonsingular");
    println!("b, c, d = {}, {}, {}", sol[0], sol[1], sol[2]);

    let homogeneous = RatMatrix::from_i64_rows(4, &[vec![-1, 1, 1, 0], vec![-1, 1, 0, 1], vec![-1, 0, 1, 1]]);
    for v in kernel_basis(&homogeneous) {
        let v = normalize_coprime(&v).expect("nonzero");
        println!("kernel line (a, b, c, d) = {}", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
    }

    let m = RatMatrix::from_rows(3, vec![vec![q(1, 2), q(1, 3), q(1, 6)], vec![q(1, 1), q(2, 3), q(1, 3)]]);
    println!("rank of a matrix with proportional rows: {}", rank(&m));
}
