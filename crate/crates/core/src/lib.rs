//! Exact circuits of graph polyhedra.
//!
//! * [`ratmat`]: rationals, dense matrices, kernels and coprime normalization.
//! * [`circuits`]: circuit test, enumeration, imbalance and circuit walks.
//! * [`graph`]: small simple graphs.
//! * [`gadgets`]: imbalance gadgets, family systems and the zig-zag polygon.
//! * [`coloring`]: fractional coloring polytope, Kempe chains and proper walks.
//! * [`forest`]: forest polytope, balanced sets, 0/±1 circuit structure and walks.
//! * [`cli`]: claim drivers, file ingestion and reports behind the `circuitkit` binary.

pub mod circuits;
pub mod cli;
pub mod coloring;
pub mod error;
pub mod forest;
pub mod gadgets;
pub mod graph;
pub mod ratmat;

pub use error::{Error, Result};
