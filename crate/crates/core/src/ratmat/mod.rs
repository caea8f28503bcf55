//! Exact rational arithmetic and dense linear algebra.

mod matrix;
mod rational;

pub use matrix::{
    axpy, canonical_form, canonical_sign, dot, is_coprime_integral, is_zero_vector, ivec, kernel_basis,
    normalize_coprime, rank, scale, solve_unique, sub_vec, support, RatMatrix, RatVector, ZeroVector,
};
pub use rational::{q, ParseRationalError, Rational};
