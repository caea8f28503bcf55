//! Circuit enumeration.
//!
//! The default method walks row subsets `R` of `B` with `rank [A; B_R] = n - 1`
//! whose one-dimensional kernel is a candidate circuit. Each such kernel is
//! reached exactly once: subsets are grown in index order in coordinates of
//! `ker A`, and a subset is only extended while it stays the greedy
//! (lexicographically first) basis of the rows it spans. The support method
//! is an independent brute force over zero-row patterns.

use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::ratmat::{canonical_form, dot, is_zero_vector, kernel_basis, rank, RatMatrix, RatVector, Rational};

use super::oracle::{
    circuit_record, imbalance, is_circuit, vector_ratio, zero_rows, Circuit, CircuitDecision, ImbalanceReport,
};
use super::ConstraintSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnumerationMethod {
    /// Row subsets of rank `n - 1`, one canonical basis per candidate kernel.
    #[default]
    RowSubsets,
    /// Every zero-row pattern with a one-dimensional kernel, then support minimality.
    SupportBruteForce,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerationOptions {
    pub max_vars: usize,
    /// Distinct row directions allowed for the brute-force method.
    pub max_bruteforce_rows: usize,
    pub method: EnumerationMethod,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { max_vars: 12, max_bruteforce_rows: 20, method: EnumerationMethod::RowSubsets }
    }
}

impl EnumerationOptions {
    pub fn with_method(method: EnumerationMethod) -> Self {
        EnumerationOptions { method, ..Default::default() }
    }
}

/// All circuits up to sign, sorted, with canonical sign.
pub fn enumerate_circuits(sys: &ConstraintSystem, opts: &EnumerationOptions) -> Result<Vec<Circuit>> {
    check_vars(sys, opts)?;
    let mut vectors = Vec::new();
    match opts.method {
        EnumerationMethod::RowSubsets => {
            visit_row_subsets(sys, &mut |v: &[Rational]| {
                vectors.push(canonical_form(v).expect("nonzero"));
                ControlFlow::Continue(())
            })?;
        }
        EnumerationMethod::SupportBruteForce => {
            for v in support_vectors(sys, opts.max_bruteforce_rows)? {
                match is_circuit(sys, &v)? {
                    CircuitDecision::Circuit(_) => vectors.push(v),
                    other => unreachable!("brute-force vector rejected by the oracle: {other:?}"),
                }
            }
        }
    }
    vectors.sort();
    vectors.dedup();
    Ok(vectors.into_iter().map(|v| circuit_record(sys, &v)).collect())
}

/// Calls `f` once per circuit (one sign, not normalized) without storing them.
/// Returns the number of circuits visited.
/// Stops early when `f` breaks.
pub fn for_each_circuit(
    sys: &ConstraintSystem,
    opts: &EnumerationOptions,
    mut f: impl FnMut(&[Rational]) -> ControlFlow<()>,
) -> Result<usize> {
    check_vars(sys, opts)?;
    let mut count = 0;
    match opts.method {
        EnumerationMethod::RowSubsets => visit_row_subsets(sys, &mut |v: &[Rational]| {
            count += 1;
            f(v)
        })?,
        EnumerationMethod::SupportBruteForce => {
            for v in support_vectors(sys, opts.max_bruteforce_rows)? {
                count += 1;
                if f(&v).is_break() {
                    break;
                }
            }
        }
    }
    Ok(count)
}

/// Imbalance over every circuit of `sys`, streamed so no circuit list is kept.
/// With `stop_at`, the stream ends as soon as some circuit reaches that ratio.
/// Also returns the number of circuits visited.
pub fn exhaustive_imbalance(
    sys: &ConstraintSystem,
    opts: &EnumerationOptions,
    stop_at: Option<&Rational>,
) -> Result<(ImbalanceReport, usize)> {
    let mut best: Option<(Rational, RatVector)> = None;
    let count = for_each_circuit(sys, opts, |v| {
        if let Some((k, _, _)) = vector_ratio(v) {
            if best.as_ref().is_none_or(|(b, _)| k > *b) {
                best = Some((k, v.to_vec()));
            }
        }
        match (&best, stop_at) {
            (Some((b, _)), Some(t)) if b >= t => ControlFlow::Break(()),
            _ => ControlFlow::Continue(()),
        }
    })?;
    let (_, v) = best.ok_or(Error::EmptySet)?;
    let rec = circuit_record(sys, &v);
    Ok((imbalance(std::slice::from_ref(&rec))?, count))
}

fn check_vars(sys: &ConstraintSystem, opts: &EnumerationOptions) -> Result<()> {
    if sys.n() > opts.max_vars {
        return Err(Error::CapExceeded { cap: "max-vars", limit: opts.max_vars, requested: sys.n() });
    }
    Ok(())
}

/// Distinct nonzero row directions of `rows` (first occurrence kept).
fn distinct_directions(rows: impl Iterator<Item = RatVector>) -> Vec<RatVector> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in rows {
        if is_zero_vector(&r) {
            continue;
        }
        let key = canonical_form(&r).expect("nonzero");
        if seen.insert(key) {
            out.push(r);
        }
    }
    out
}

fn visit_row_subsets(sys: &ConstraintSystem, f: &mut dyn FnMut(&[Rational]) -> ControlFlow<()>) -> Result<()> {
    let k0 = kernel_basis(&sys.a);
    let d = k0.len();
    if d == 0 {
        return Ok(());
    }
    // Rows of B expressed on the basis of ker A.
    let rows = distinct_directions(sys.ineq.row_iter().map(|r| k0.iter().map(|k| dot(r, k)).collect::<RatVector>()));
    if rank(&RatMatrix::from_rows(d, rows.clone())) < d {
        return Err(Error::LinealitySpace);
    }
    let identity_kernel = sys.a.rows() == 0;
    let lift = |z: &[Rational]| -> RatVector {
        if identity_kernel {
            return z.to_vec();
        }
        let mut g = vec![Rational::zero(); sys.n()];
        for (c, k) in z.iter().zip(&k0) {
            if c.is_zero() {
                continue;
            }
            for (gi, ki) in g.iter_mut().zip(k) {
                if !ki.is_zero() {
                    *gi += c * ki;
                }
            }
        }
        g
    };
    if d == 1 {
        let _ = f(&k0[0]);
        return Ok(());
    }
    if let Some(int_rows) = integer_rows(&rows, d) {
        let mut emit = |chosen: &[usize]| {
            let picked: Vec<&[i64]> = chosen.iter().map(|&r| &int_rows[r * d..(r + 1) * d]).collect();
            let z = match integer_kernel_line(&picked, d) {
                Some(z) => z.into_iter().map(|x| Rational::from_bigint(x.into())).collect(),
                None => {
                    let m = RatMatrix::from_rows(d, chosen.iter().map(|&r| rows[r].clone()).collect());
                    kernel_basis(&m).pop().expect("one-dimensional kernel")
                }
            };
            f(&lift(&z))
        };
        let mut search = IntSearch { m: rows.len(), emit: &mut emit };
        let _ = search.extend(0, d, &int_rows, &mut Vec::new(), &mut Vec::new());
        return Ok(());
    }
    let basis: Vec<RatVector> =
        (0..d).map(|i| (0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    let mut found = Vec::new();
    let mut search = FlatSearch { m: rows.len(), found: &mut found };
    search.extend(0, &basis, &rows, &mut Vec::new());
    for z in found {
        if f(&lift(&z)).is_break() {
            break;
        }
    }
    Ok(())
}

/// Rows scaled to primitive integer vectors, flattened. `None` when the entries
/// or the Hadamard bound on the minors of any `d` rows leave no headroom in `i64`.
fn integer_rows(rows: &[RatVector], d: usize) -> Option<Vec<i64>> {
    let mut out = Vec::new();
    let mut log_norms = Vec::new();
    for r in rows {
        let l = r.iter().fold(num_bigint::BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, &x.denom()));
        let scale = Rational::from_bigint(l);
        let mut sq = 0f64;
        for x in r {
            let v = (x * &scale).to_i64()?;
            sq += (v as f64) * (v as f64);
            out.push(v);
        }
        log_norms.push(sq.sqrt().log2());
    }
    log_norms.sort_by(|a, b| b.total_cmp(a));
    let bound: f64 = log_norms.iter().take(d).sum();
    (bound < 60.0).then_some(out)
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(v: &mut [i128]) {
    let g = v.iter().fold(0, |g, &x| gcd_i128(g, x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

/// Spanning vector of the kernel of `rows` (rank `d - 1`), by fraction-free
/// Gauss-Jordan elimination. `None` on overflow.
fn integer_kernel_line(rows: &[&[i64]], d: usize) -> Option<Vec<i128>> {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..d {
        let Some(pr) = (row..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        for i in 0..m.len() {
            if i == row || m[i][col] == 0 {
                continue;
            }
            let (a, b) = (m[row][col], m[i][col]);
            for j in 0..d {
                m[i][j] = m[i][j].checked_mul(a)?.checked_sub(m[row][j].checked_mul(b)?)?;
            }
            primitive(&mut m[i]);
        }
        pivots.push(col);
        row += 1;
    }
    let free = (0..d).find(|c| !pivots.contains(c))?;
    let l = pivots.iter().enumerate().try_fold(1i128, |l, (i, _)| {
        let p = m[i][pivots[i]].abs();
        l.checked_mul(p / gcd_i128(l, p))
    })?;
    let mut z = vec![0i128; d];
    z[free] = l;
    for (i, &c) in pivots.iter().enumerate() {
        z[c] = -(m[i][free].checked_mul(l / m[i][c])?);
    }
    primitive(&mut z);
    Some(z)
}

/// The greedy-basis search of [`FlatSearch`] on integer coordinates. Coordinates
/// stay primitive multiples of minors, so the Hadamard check in
/// [`integer_rows`] rules out overflow.
struct IntSearch<'a> {
    m: usize,
    emit: &'a mut dyn FnMut(&[usize]) -> ControlFlow<()>,
}

impl IntSearch<'_> {
    /// `coords` is `m x dim`, row-major.
    fn extend(
        &mut self,
        start: usize,
        dim: usize,
        coords: &[i64],
        excluded: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
    ) -> ControlFlow<()> {
        let base_len = excluded.len();
        let row = |s: usize| &coords[s * dim..(s + 1) * dim];
        for r in start..self.m {
            let rr = row(r);
            let Some(p) = rr.iter().position(|&c| c != 0) else {
                continue;
            };
            let a = rr[p] as i128;
            let parallel = |s: usize| {
                let rs = row(s);
                let sp = rs[p] as i128;
                (0..dim).all(|l| rs[l] as i128 * a == sp * rr[l] as i128)
            };
            if excluded.iter().all(|&s| !parallel(s)) {
                chosen.push(r);
                if dim == 2 {
                    (self.emit)(chosen)?;
                } else {
                    let nd = dim - 1;
                    let mut next = vec![0i64; self.m * nd];
                    let mut buf = vec![0i128; nd];
                    for s in excluded.iter().copied().chain(r + 1..self.m) {
                        let rs = row(s);
                        let sp = rs[p] as i128;
                        let mut k = 0;
                        for l in (0..dim).filter(|&l| l != p) {
                            buf[k] = rs[l] as i128 * a - sp * rr[l] as i128;
                            k += 1;
                        }
                        primitive(&mut buf);
                        for l in 0..nd {
                            next[s * nd + l] = i64::try_from(buf[l]).expect("bounded by the Hadamard check");
                        }
                    }
                    self.extend(r + 1, nd, &next, excluded, chosen)?;
                }
                chosen.pop();
            }
            excluded.push(r);
        }
        excluded.truncate(base_len);
        ControlFlow::Continue(())
    }
}

struct FlatSearch<'a> {
    m: usize,
    found: &'a mut Vec<RatVector>,
}

impl FlatSearch<'_> {
    /// `basis` spans the common kernel of the chosen rows; `coords[s]` holds the
    /// pairing of row `s` with each basis vector; `excluded` are rows skipped
    /// while independent, which must stay outside the span.
    fn extend(&mut self, start: usize, basis: &[RatVector], coords: &[RatVector], excluded: &mut Vec<usize>) {
        let base_len = excluded.len();
        for r in start..self.m {
            let Some(p) = coords[r].iter().position(|c| !c.is_zero()) else {
                continue;
            };
            let pivot = coords[r][p].clone();
            let factors: Vec<Rational> = coords[r].iter().map(|c| c / &pivot).collect();
            let reduce = |v: &[Rational]| -> RatVector {
                v.iter()
                    .enumerate()
                    .filter(|&(l, _)| l != p)
                    .map(|(l, x)| if factors[l].is_zero() { x.clone() } else { x - &(&factors[l] * &v[p]) })
                    .collect()
            };
            let new_coords: Vec<RatVector> = coords.iter().map(|c| reduce(c)).collect();
            let keeps_excluded = excluded.iter().all(|&s| !is_zero_vector(&new_coords[s]));
            if keeps_excluded {
                let d_new = basis.len() - 1;
                let new_basis: Vec<RatVector> = (0..basis.len())
                    .filter(|&l| l != p)
                    .map(|l| {
                        if factors[l].is_zero() {
                            basis[l].clone()
                        } else {
                            basis[l].iter().zip(&basis[p]).map(|(a, b)| a - &(&factors[l] * b)).collect()
                        }
                    })
                    .collect();
                if d_new == 1 {
                    self.found.push(new_basis[0].clone());
                } else {
                    self.extend(r + 1, &new_basis, &new_coords, excluded);
                }
            }
            excluded.push(r);
        }
        excluded.truncate(base_len);
    }
}

fn support_vectors(sys: &ConstraintSystem, max_rows: usize) -> Result<Vec<RatVector>> {
    let n = sys.n();
    if !kernel_basis(&sys.a.vstack(&sys.ineq)).is_empty() {
        return Err(Error::LinealitySpace);
    }
    let rows = distinct_directions(sys.ineq.row_iter().map(|r| r.to_vec()));
    if rows.len() > max_rows {
        return Err(Error::CapExceeded { cap: "bruteforce-rows", limit: max_rows, requested: rows.len() });
    }
    let m = rows.len();
    let mut candidates: BTreeSet<RatVector> = BTreeSet::new();
    for mask in 0u64..(1u64 << m) {
        let chosen: Vec<RatVector> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| rows[i].clone()).collect();
        let stack = sys.a.vstack(&RatMatrix::from_rows(n, chosen));
        let k = kernel_basis(&stack);
        if k.len() == 1 {
            candidates.insert(canonical_form(&k[0]).expect("nonzero"));
        }
    }
    let supports: Vec<(RatVector, u64)> = candidates
        .into_iter()
        .map(|v| {
            let s = (0..m).filter(|&i| !dot(&rows[i], &v).is_zero()).fold(0u64, |acc, i| acc | 1 << i);
            (v, s)
        })
        .collect();
    Ok(supports
        .iter()
        .filter(|(_, s)| !supports.iter().any(|(_, t)| t != s && t & s == *t))
        .map(|(v, _)| v.clone())
        .collect())
}

/// Circuits whose zero-row set is recorded against `sys`.
pub fn with_zero_rows(sys: &ConstraintSystem, vectors: &[RatVector]) -> Vec<Circuit> {
    vectors
        .iter()
        .map(|v| Circuit { vector: canonical_form(v).expect("nonzero"), zero_rows: zero_rows(sys, v) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::ivec;

    fn vectors(sys: &ConstraintSystem, method: EnumerationMethod) -> Vec<RatVector> {
        enumerate_circuits(sys, &EnumerationOptions::with_method(method))
            .unwrap()
            .into_iter()
            .map(|c| c.vector)
            .collect()
    }

    fn both(sys: &ConstraintSystem) -> Vec<RatVector> {
        let a = vectors(sys, EnumerationMethod::RowSubsets);
        assert_eq!(a, vectors(sys, EnumerationMethod::SupportBruteForce));
        a
    }

    #[test]
    fn identity_block() {
        let s = ConstraintSystem::from_i64(2, &[], &[(vec![1, 0], 1), (vec![0, 1], 1)]);
        assert_eq!(both(&s), vec![ivec(&[0, 1]), ivec(&[1, 0])]);
    }

    #[test]
    fn identity_plus_sum_row() {
        let s = ConstraintSystem::from_i64(2, &[], &[(vec![1, 0], 1), (vec![0, 1], 1), (vec![1, 1], 1)]);
        assert_eq!(both(&s), vec![ivec(&[0, 1]), ivec(&[1, -1]), ivec(&[1, 0])]);
    }

    #[test]
    fn simplex_directions() {
        let s = ConstraintSystem::from_i64(
            3,
            &[(vec![1, 1, 1], 1)],
            &[(vec![1, 0, 0], 1), (vec![0, 1, 0], 1), (vec![0, 0, 1], 1)],
        );
        assert_eq!(both(&s), vec![ivec(&[0, 1, -1]), ivec(&[1, -1, 0]), ivec(&[1, 0, -1])]);
    }

    #[test]
    fn cap_and_lineality() {
        let s = ConstraintSystem::new(13);
        assert!(matches!(enumerate_circuits(&s, &EnumerationOptions::default()), Err(Error::CapExceeded { .. })));
        let s = ConstraintSystem::from_i64(2, &[], &[(vec![1, 0], 1)]);
        assert_eq!(enumerate_circuits(&s, &EnumerationOptions::default()), Err(Error::LinealitySpace));
    }

    #[test]
    fn point_system_has_no_circuits() {
        let s = ConstraintSystem::from_i64(1, &[(vec![1], 0)], &[(vec![1], 1)]);
        assert!(both(&s).is_empty());
    }
}
