//! Circuit decision by kernel dimension.
//!
//! For `g` in `ker A` let `B0` be the rows of `B` with `(Bg)_i = 0`. Every
//! `y` in `ker [A; B0]` satisfies `supp(By) ⊆ supp(Bg)`. If that kernel is the
//! line through `g`, no vector of strictly smaller `B`-support exists and `g`
//! is a circuit. If it has dimension at least two, intersecting it with
//! `{B_i y = 0}` for some `i` in `supp(Bg)` leaves a nonzero `y`, and that `y`
//! has strictly smaller `B`-support.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratmat::{canonical_form, is_zero_vector, kernel_basis, RatMatrix, RatVector, Rational};

use super::ConstraintSystem;

/// Coprime integer kernel vector with support-minimal `B`-image, canonical sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Circuit {
    pub vector: RatVector,
    pub zero_rows: Vec<usize>,
}

impl Circuit {
    pub fn negated(&self) -> RatVector {
        self.vector.iter().map(|x| -x).collect()
    }

    /// Whether every entry lies in {0, ±1}.
    pub fn is_01(&self) -> bool {
        self.vector.iter().all(|x| x.is_zero() || x.abs() == Rational::one())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircuitDecision {
    Circuit(Circuit),
    /// A kernel vector whose `B`-support is strictly contained in that of the input.
    NotCircuit {
        witness: RatVector,
    },
    NotInKernel,
}

impl CircuitDecision {
    pub fn is_circuit(&self) -> bool {
        matches!(self, CircuitDecision::Circuit(_))
    }
}

/// Indices `i` with `(B v)_i = 0`.
pub fn zero_rows(sys: &ConstraintSystem, v: &[Rational]) -> Vec<usize> {
    sys.ineq.mul_vec(v).iter().enumerate().filter(|(_, x)| x.is_zero()).map(|(i, _)| i).collect()
}

/// Indices `i` with `(B v)_i != 0`.
pub fn b_support(sys: &ConstraintSystem, v: &[Rational]) -> Vec<usize> {
    sys.ineq.mul_vec(v).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i).collect()
}

/// `supp(B y) ⊊ supp(B g)`.
pub fn strictly_smaller_support(sys: &ConstraintSystem, y: &[Rational], g: &[Rational]) -> bool {
    let by = sys.ineq.mul_vec(y);
    let bg = sys.ineq.mul_vec(g);
    let subset = by.iter().zip(&bg).all(|(a, b)| a.is_zero() || !b.is_zero());
    let strict = by.iter().zip(&bg).any(|(a, b)| a.is_zero() && !b.is_zero());
    subset && strict
}

pub(crate) fn stacked(sys: &ConstraintSystem, rows: &[usize]) -> RatMatrix {
    let nonzero: Vec<usize> = rows.iter().copied().filter(|&i| !is_zero_vector(sys.ineq.row(i))).collect();
    sys.a.vstack(&sys.ineq.select_rows(&nonzero))
}

pub fn is_circuit(sys: &ConstraintSystem, g: &[Rational]) -> Result<CircuitDecision> {
    sys.check_len(g)?;
    if is_zero_vector(g) {
        return Err(Error::ZeroVector);
    }
    if !is_zero_vector(&sys.a.mul_vec(g)) {
        return Ok(CircuitDecision::NotInKernel);
    }
    let bg = sys.ineq.mul_vec(g);
    let zero: Vec<usize> = (0..bg.len()).filter(|&i| bg[i].is_zero()).collect();
    let m = stacked(sys, &zero);
    let kernel = kernel_basis(&m);
    if kernel.len() == 1 {
        let vector = canonical_form(g).expect("nonzero");
        return Ok(CircuitDecision::Circuit(Circuit { vector, zero_rows: zero }));
    }
    let Some(i) = (0..bg.len()).find(|&i| !bg[i].is_zero()) else {
        return Err(Error::LinealitySpace);
    };
    let mut m2 = m;
    m2.push_row(sys.ineq.row(i));
    let y = kernel_basis(&m2).into_iter().next().expect("kernel dimension drops by at most one");
    Ok(CircuitDecision::NotCircuit { witness: canonical_form(&y).expect("basis vector nonzero") })
}

/// Builds the `Circuit` record for a vector already known to be a circuit.
pub fn circuit_record(sys: &ConstraintSystem, g: &[Rational]) -> Circuit {
    Circuit { vector: canonical_form(g).expect("nonzero"), zero_rows: zero_rows(sys, g) }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImbalanceReport {
    pub kappa: Rational,
    pub witness_circuit: Circuit,
    pub witness_indices: (usize, usize),
}

/// `|g(i)/g(j)|` for the largest and smallest nonzero entries, with their
/// indices (first occurrence of each).
pub fn vector_ratio(v: &[Rational]) -> Option<(Rational, usize, usize)> {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    let &first = nz.first()?;
    let (mut imax, mut imin) = (first, first);
    for &i in &nz {
        if v[i].abs() > v[imax].abs() {
            imax = i;
        }
        if v[i].abs() < v[imin].abs() {
            imin = i;
        }
    }
    Some(((&v[imax] / &v[imin]).abs(), imax, imin))
}

/// Largest `|g(i)/g(j)|` over all circuits and nonzero entry pairs.
pub fn imbalance(circuits: &[Circuit]) -> Result<ImbalanceReport> {
    let mut best: Option<ImbalanceReport> = None;
    for c in circuits {
        let Some((kappa, imax, imin)) = vector_ratio(&c.vector) else {
            continue;
        };
        if best.as_ref().is_none_or(|b| kappa > b.kappa) {
            best = Some(ImbalanceReport { kappa, witness_circuit: c.clone(), witness_indices: (imax, imin) });
        }
    }
    best.ok_or(Error::EmptySet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::ivec;

    fn box2() -> ConstraintSystem {
        ConstraintSystem::from_i64(2, &[], &[(vec![1, 0], 1), (vec![0, 1], 1), (vec![1, 1], 1)])
    }

    #[test]
    fn unit_and_difference_vectors() {
        let s = box2();
        assert!(is_circuit(&s, &ivec(&[1, 0])).unwrap().is_circuit());
        assert!(is_circuit(&s, &ivec(&[1, -1])).unwrap().is_circuit());
        match is_circuit(&s, &ivec(&[1, 1])).unwrap() {
            CircuitDecision::NotCircuit { witness } => {
                assert!(strictly_smaller_support(&s, &witness, &ivec(&[1, 1])));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kernel_membership_and_zero() {
        let s = ConstraintSystem::from_i64(3, &[(vec![1, 1, 1], 0)], &[(vec![1, 0, 0], 0)]);
        assert_eq!(is_circuit(&s, &ivec(&[1, 0, 0])).unwrap(), CircuitDecision::NotInKernel);
        assert_eq!(is_circuit(&s, &ivec(&[0, 0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn lineality_is_reported() {
        let s = ConstraintSystem::from_i64(2, &[], &[(vec![1, 0], 1)]);
        assert!(is_circuit(&s, &ivec(&[0, 1])).unwrap().is_circuit());
        let s = ConstraintSystem::from_i64(3, &[], &[(vec![1, 0, 0], 1)]);
        assert_eq!(is_circuit(&s, &ivec(&[0, 1, 0])), Err(Error::LinealitySpace));
    }

    #[test]
    fn imbalance_picks_extreme_ratio() {
        let c = |v: &[i64]| Circuit { vector: ivec(v), zero_rows: vec![] };
        let r = imbalance(&[c(&[1, -1, 0]), c(&[2, -2, 1])]).unwrap();
        assert_eq!(r.kappa, Rational::from_int(2));
        assert_eq!(r.witness_indices, (0, 2));
        assert_eq!(imbalance(&[]), Err(Error::EmptySet));
    }
}
