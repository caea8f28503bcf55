//! Circuits of `{x : A x = b, B x <= d}`: decision, enumeration, imbalance,
//! feasibility, maximal steps and circuit walks.

mod enumerate;
mod oracle;
mod system;
mod walk;

pub use enumerate::{
    enumerate_circuits, exhaustive_imbalance, for_each_circuit, with_zero_rows, EnumerationMethod, EnumerationOptions,
};
pub use oracle::{
    b_support, circuit_record, imbalance, is_circuit, strictly_smaller_support, vector_ratio, zero_rows, Circuit,
    CircuitDecision, ImbalanceReport,
};
pub use system::ConstraintSystem;
pub use walk::{
    direction_feasible, feasible_circuits_at, max_step, validate_walk, walk_bfs, StepBound, WalkOptions, WalkTrace,
    WalkViolation,
};
