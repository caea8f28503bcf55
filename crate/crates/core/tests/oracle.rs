mod common;

use circuitkit::circuits::{
    enumerate_circuits, is_circuit, strictly_smaller_support, CircuitDecision, EnumerationMethod, EnumerationOptions,
};
use circuitkit::ratmat::{is_coprime_integral, is_zero_vector, kernel_basis, q, rank, RatMatrix, Rational};
use proptest::prelude::*;

fn brute_force() -> EnumerationOptions {
    EnumerationOptions {
        max_bruteforce_rows: 24,
        ..EnumerationOptions::with_method(EnumerationMethod::SupportBruteForce)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_methods_agree(seed in any::<u64>()) {
        let sys = common::random_system(seed);
        let rows = enumerate_circuits(&sys, &EnumerationOptions::default()).unwrap();
        let brute = enumerate_circuits(&sys, &brute_force()).unwrap();
        prop_assert_eq!(&rows, &brute);
        for c in &rows {
            prop_assert!(is_coprime_integral(&c.vector));
            prop_assert!(is_circuit(&sys, &c.vector).unwrap().is_circuit());
            let neg = c.negated();
            prop_assert!(is_circuit(&sys, &neg).unwrap().is_circuit());
        }
    }

    #[test]
    fn sums_of_circuits_are_decided_with_sound_witnesses(seed in any::<u64>(), i in 0usize..64, j in 0usize..64, s in -3i64..=3) {
        let sys = common::random_system(seed);
        let cs = enumerate_circuits(&sys, &EnumerationOptions::default()).unwrap();
        prop_assume!(cs.len() >= 2);
        let (a, b) = (&cs[i % cs.len()].vector, &cs[j % cs.len()].vector);
        let g: Vec<Rational> = a.iter().zip(b).map(|(x, y)| x + &(y * &Rational::from_int(s))).collect();
        prop_assume!(!is_zero_vector(&g));
        match is_circuit(&sys, &g).unwrap() {
            CircuitDecision::Circuit(c) => prop_assert!(cs.iter().any(|d| d.vector == c.vector)),
            CircuitDecision::NotCircuit { witness } => {
                prop_assert!(is_zero_vector(&sys.a.mul_vec(&witness)));
                prop_assert!(strictly_smaller_support(&sys, &witness, &g));
            }
            CircuitDecision::NotInKernel => prop_assert!(false, "sum of kernel vectors left the kernel"),
        }
    }

    #[test]
    fn kernel_basis_spans_the_null_space(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 0..6)) {
        let m = RatMatrix::from_i64_rows(5, &rows);
        let basis = kernel_basis(&m);
        prop_assert_eq!(basis.len() + rank(&m), 5);
        for v in &basis {
            prop_assert!(is_zero_vector(&m.mul_vec(v)));
        }
    }

    #[test]
    fn rational_field_laws(a in -40i64..40, b in 1i64..40, c in -40i64..40, d in 1i64..40) {
        let (x, y) = (q(a, b), q(c, d));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x.clone());
        }
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x.clone());
        prop_assert_eq!(x.to_string().contains('/'), !x.is_integer());
    }
}

#[test]
fn big_values_leave_the_fast_path_and_return() {
    let big = Rational::from_int(i64::MAX);
    let sq = &big * &big;
    assert_eq!(&sq / &big, big);
    assert_eq!(sq.to_string(), "85070591730234615847396907784232501249");
    assert_eq!(serde_json::to_string(&q(-6, 4)).unwrap(), "\"-3/2\"");
    assert_eq!(serde_json::from_str::<Rational>("7").unwrap(), Rational::from_int(7));
}
