//! Circuits of the unit square and of a triangle, by enumeration and by the oracle.

use circuitkit::circuits::{enumerate_circuits, is_circuit, CircuitDecision, ConstraintSystem, EnumerationOptions};
use circuitkit::ratmat::ivec;

fn show(v: &[circuitkit::ratmat::Rational]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

fn main() {
    let square =
        ConstraintSystem::from_i64(2, &[], &[(vec![1, 0], 1), (vec![0, 1], 1), (vec![-1, 0], 0), (vec![0, -1], 0)]);
    let triangle = ConstraintSystem::from_i64(2, &[], &[(vec![-1, 0], 0), (vec![0, -1], 0), (vec![1, 1], 1)]);
    for (name, sys) in [("square", &square), ("triangle", &triangle)] {
        let cs = enumerate_circuits(sys, &EnumerationOptions::default()).expect("small");
        println!("{name}: {}", cs.iter().map(|c| show(&c.vector)).collect::<Vec<_>>().join(" "));
    }
    for v in [ivec(&[1, 0]), ivec(&[1, 1]), ivec(&[1, -1])] {
        match is_circuit(&square, &v).expect("dimensions match") {
            CircuitDecision::Circuit(_) => println!("square: {} is a circuit", show(&v)),
            CircuitDecision::NotCircuit { witness } => {
                println!("square: {} is not, {} has smaller support", show(&v), show(&witness))
            }
            CircuitDecision::NotInKernel => println!("square: {} is outside the kernel", show(&v)),
        }
    }
}
